package alluxio.client.file;

import alluxio.AlluxioURI;

public interface FileSystem {
  // mount(alluxioPath, ufsPath, options) attaches an under storage path
  void mount(AlluxioURI alluxioPath, AlluxioURI ufsPath, MountOptions options);

  boolean isMounted(AlluxioURI alluxioPath);

  FileInStream openFile(AlluxioURI path, OpenFileOptions options);
}
