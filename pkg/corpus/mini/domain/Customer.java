public class Customer {
    private final long id;
    private final String naam;
    private final String status;

    public Customer(long id, String naam, String status) {
        this.id = id;
        this.naam = naam;
        this.status = status;
    }

    public long getId() {
        return id;
    }

    public String getNaam() {
        return naam;
    }

    public String getStatus() {
        return status;
    }
}
