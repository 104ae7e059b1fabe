package alluxio.client.file;

public abstract class AbstractMessage {
  public boolean isInitialized() {
    return true;
  }

  public abstract byte[] toByteArray();
}
