package shop;

import static org.junit.Assert.assertEquals;

import java.util.List;
import org.junit.Test;

public class CatalogTest {
  @Test
  public void listsNames() {
    Catalog c = new Catalog();
    c.add("apple");
    c.add("pear");
    List<String> r = c.names();
    assertEquals(2, r.size());
    assertEquals(r.get(0), "apple");
  }
}
