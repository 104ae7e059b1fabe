package alluxio.client.file;

public final class OpenFileOptions {
  public static OpenFileOptions defaults() {
    return new OpenFileOptions();
  }
}
