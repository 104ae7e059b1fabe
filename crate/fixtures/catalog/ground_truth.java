@Test
public void listsNames() {
  Catalog c = new Catalog();
  c.add("apple");
  c.add("pear");
  NameList r = c.names();
  assertEquals(2, r.size());
  assertEquals(r.get(0), "apple");
}
