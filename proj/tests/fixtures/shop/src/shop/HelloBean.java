package shop;

public class HelloBean implements Hello {

    public void ejbCreate() {
    }

    public void ejbRemove() {
    }

    public String sayHello() {
        return "hello";
    }
}
