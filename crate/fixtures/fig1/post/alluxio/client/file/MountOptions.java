package alluxio.client.file;

/**
 * Mount options used before the protobuf migration.
 */
public final class MountOptions {
  private boolean mReadOnly;

  public static MountOptions defaults() {
    return new MountOptions();
  }

  public MountOptions setReadOnly(boolean readOnly) {
    mReadOnly = readOnly;
    return this;
  }

  public boolean isReadOnly() {
    return mReadOnly;
  }
}
