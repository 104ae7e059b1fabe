package shop;

import java.util.List;

public final class CatalogPrinter {
  public String print(Catalog catalog) {
    List<String> names = catalog.names();
    return String.join(", ", names);
  }

  public int count(Catalog catalog) {
    return catalog.names().size();
  }
}
