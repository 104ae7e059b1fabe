package shop;

import java.util.List;

public final class CatalogPrinter {
  public String print(Catalog catalog) {
    NameList names = catalog.names();
    return names.join(", ");
  }

  public int count(Catalog catalog) {
    return catalog.names().size();
  }
}
