package alluxio.client.file;

import alluxio.AlluxioURI;
import java.util.HashMap;
import java.util.Map;

public class BaseFileSystem implements FileSystem {
  private final Map<String, String> mMountTable = new HashMap<>();

  @Override
  public void mount(AlluxioURI alluxioPath, AlluxioURI ufsPath, MountOptions options) {
    checkUri(alluxioPath);
    mMountTable.put(alluxioPath.getPath(), ufsPath.getPath());
  }

  @Override
  public boolean isMounted(AlluxioURI alluxioPath) {
    return mMountTable.containsKey(alluxioPath.getPath());
  }

  public FileInStream openFile(AlluxioURI path) {
    return openFile(path, OpenFileOptions.defaults());
  }

  @Override
  public FileInStream openFile(AlluxioURI path, OpenFileOptions options) {
    checkUri(path);
    return new FileInStream();
  }

  private void checkUri(AlluxioURI uri) {
    if (uri.getPath().isEmpty()) {
      throw new IllegalArgumentException("empty path");
    }
  }
}
