package shop;

import java.util.ArrayList;
import java.util.List;

public class Catalog {
  private final List<String> mNames = new ArrayList<>();

  public void add(String name) {
    mNames.add(name);
  }

  public List<String> names() {
    return new ArrayList<>(mNames);
  }
}
