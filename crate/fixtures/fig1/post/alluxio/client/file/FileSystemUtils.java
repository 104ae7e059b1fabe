package alluxio.client.file;

import alluxio.AlluxioURI;
import java.util.List;

public final class FileSystemUtils {
  private FileSystemUtils() {}

  public static void mountAll(FileSystem fs, List<AlluxioURI> paths, AlluxioURI ufs) {
    for (AlluxioURI p : paths) {
      fs.mount(p, ufs, MountPOptions.getDefaultInstance());
    }
  }

  public static void remount(FileSystem fs, AlluxioURI p, AlluxioURI ufs) {
    fs.mount(p, ufs, MountPOptions.getDefaultInstance());
  }

  public static void mountOne(FileSystem fs, AlluxioURI p, AlluxioURI ufs) {
    fs.mount(p, ufs, MountPOptions.getDefaultInstance());
  }
}
