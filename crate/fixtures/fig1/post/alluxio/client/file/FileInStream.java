package alluxio.client.file;

public class FileInStream {
  public int read() {
    return -1;
  }
}
