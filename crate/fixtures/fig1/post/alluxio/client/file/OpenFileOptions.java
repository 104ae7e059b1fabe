    package alluxio.client.file;

    public final class OpenFileOptions {
      public static OpenFileOptions defaults() {
        return new OpenFileOptions();
      }

      public static OpenFileOptions getDefaultInstance() {
        return new OpenFileOptions();
      }
}
