package alluxio.client.file;

import static org.junit.Assert.assertTrue;

import alluxio.AlluxioURI;
import org.junit.Before;
import org.junit.Test;

public final class BaseFileSystemTest {
  private BaseFileSystem mFileSystem;

  @Before
  public void before() {
    mFileSystem = new BaseFileSystem();
  }

  /**
   * Tests that a mounted path is reported as mounted.
   */
  @Test
  public void mount() throws Exception {
    AlluxioURI alluxioPath = new AlluxioURI("/t");
    AlluxioURI ufsPath = new AlluxioURI("/u");
    MountPOptions mountOptions = MountPOptions.getDefaultInstance();
    mFileSystem.mount(alluxioPath, ufsPath, mountOptions);
    assertTrue(mFileSystem.isMounted(alluxioPath));
  }
}
