@Test
public void mount() throws Exception {
  AlluxioURI alluxioPath = new AlluxioURI("/t");
  AlluxioURI ufsPath = new AlluxioURI("/u");
  MountPOptions mountOptions = MountPOptions.getDefaultInstance();
  mFileSystem.mount(alluxioPath, ufsPath, mountOptions);
  assertTrue(mFileSystem.isMounted(alluxioPath));
}
