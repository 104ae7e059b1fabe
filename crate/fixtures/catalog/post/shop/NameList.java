package shop;

import java.util.ArrayList;
import java.util.Collections;
import java.util.List;

/**
 * An immutable list of names.
 */
public final class NameList {
  private final List<String> mItems;

  private NameList(List<String> items) {
    mItems = Collections.unmodifiableList(new ArrayList<>(items));
  }

  public static NameList copyOf(List<String> items) {
    return new NameList(items);
  }

  public int size() {
    return mItems.size();
  }

  public String get(int index) {
    return mItems.get(index);
  }

  public boolean isEmpty() {
    return mItems.isEmpty();
  }

  public boolean contains(String name) {
    return mItems.contains(name);
  }

  public String join(String separator) {
    return String.join(separator, mItems);
  }
}
