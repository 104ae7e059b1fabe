package alluxio.client.file;

import alluxio.AlluxioURI;

public class DelegatingFileSystem implements FileSystem {
  private final FileSystem mDelegate;

  public DelegatingFileSystem(FileSystem delegate) {
    mDelegate = delegate;
  }

  @Override
  public void mount(AlluxioURI alluxioPath, AlluxioURI ufsPath, MountOptions options) {
    mDelegate.mount(alluxioPath, ufsPath, options);
  }

  @Override
  public boolean isMounted(AlluxioURI alluxioPath) {
    return mDelegate.isMounted(alluxioPath);
  }

  @Override
  public FileInStream openFile(AlluxioURI path, OpenFileOptions options) {
    return mDelegate.openFile(path, options);
  }
}
