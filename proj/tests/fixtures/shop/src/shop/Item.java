package shop;

public class Item {

    public String name;

    public String getName() {
        return name;
    }
}
