package alluxio.client.file;

/**
 * Protobuf-style mount options.
 */
public final class MountPOptions extends AbstractMessage {
  public static final int READONLY_FIELD_NUMBER = 1;
  public static final int SHARED_FIELD_NUMBER = 2;
  private static final MountPOptions DEFAULT_INSTANCE = new MountPOptions(false, false);
  private final boolean readOnly_;
  private final boolean shared_;

  private MountPOptions(boolean readOnly, boolean shared) {
    readOnly_ = readOnly;
    shared_ = shared;
  }

  public static MountPOptions getDefaultInstance() {
    return DEFAULT_INSTANCE;
  }

  public MountPOptions getDefaultInstanceForType() {
    return DEFAULT_INSTANCE;
  }

  // true when the read-only flag was set explicitly
  public boolean hasReadOnly() {
    return readOnly_;
  }

  public boolean getReadOnly() {
    return readOnly_;
  }

  public boolean getShared() {
    return shared_;
  }

  public static Builder newBuilder() {
    return new Builder();
  }

  @Override
  public byte[] toByteArray() {
    return new byte[] {(byte) (readOnly_ ? 1 : 0), (byte) (shared_ ? 1 : 0)};
  }

  public static final class Builder {
    private boolean mReadOnly;
    private boolean mShared;

    public Builder setReadOnly(boolean readOnly) {
      mReadOnly = readOnly;
      return this;
    }

    public Builder setShared(boolean shared) {
      mShared = shared;
      return this;
    }

    public MountPOptions build() {
      return new MountPOptions(mReadOnly, mShared);
    }
  }
}
