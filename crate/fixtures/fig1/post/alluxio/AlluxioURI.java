package alluxio;

public final class AlluxioURI {
  private final String mPath;

  public AlluxioURI(String path) {
    mPath = path;
  }

  public String getPath() {
    return mPath;
  }
}
