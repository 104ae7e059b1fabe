package alluxio.cli;

import alluxio.AlluxioURI;
import alluxio.client.file.FileSystem;
import alluxio.client.file.MountOptions;

public final class MountCommand {
  private final FileSystem mFileSystem;

  public MountCommand(FileSystem fileSystem) {
    mFileSystem = fileSystem;
  }

  public void run(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    mFileSystem.mount(alluxioPath, ufsPath, MountOptions.defaults());
  }

  public void runQuiet(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    mFileSystem.mount(alluxioPath, ufsPath, MountOptions.defaults());
  }

  public void runDefault(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    // same as run(): mFileSystem.mount(alluxioPath, ufsPath, options)
    mFileSystem.mount(alluxioPath, ufsPath, MountOptions.defaults());
  }

  public void runVerbose(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    System.out.println("Mounting " + ufsPath.getPath());
    mFileSystem.mount(alluxioPath, ufsPath, MountOptions.defaults());
  }

  public void runReadOnly(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    MountOptions options = MountOptions.defaults().setReadOnly(true);
    mFileSystem.mount(alluxioPath, ufsPath, options);
  }
}
