package alluxio.cli;

import alluxio.AlluxioURI;
import alluxio.client.file.FileSystem;
import alluxio.client.file.MountPOptions;

public final class MountCommand {
  private final FileSystem mFileSystem;

  public MountCommand(FileSystem fileSystem) {
    mFileSystem = fileSystem;
  }

  public void run(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    mFileSystem.mount(alluxioPath, ufsPath, MountPOptions.getDefaultInstance());
  }

  public void runQuiet(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    mFileSystem.mount(alluxioPath, ufsPath, MountPOptions.getDefaultInstance());
  }

  public void runDefault(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    // same as run(): mFileSystem.mount(alluxioPath, ufsPath, options)
    mFileSystem.mount(alluxioPath, ufsPath, MountPOptions.getDefaultInstance());
  }

  public void runVerbose(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    System.out.println("Mounting " + ufsPath.getPath());
    mFileSystem.mount(alluxioPath, ufsPath, MountPOptions.getDefaultInstance());
  }

  public void runReadOnly(AlluxioURI alluxioPath, AlluxioURI ufsPath) {
    MountPOptions options = MountPOptions.newBuilder().setReadOnly(true).build();
    mFileSystem.mount(alluxioPath, ufsPath, options);
  }
}
