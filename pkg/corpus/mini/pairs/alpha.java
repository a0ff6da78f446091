public class GetC1 {
    private final Repository repository;

    public GetC1(Repository repository) {
        this.repository = repository;
    }

    public String getNaam(long id) {
        Customer c1 = repository.findCustomer(id);
        if (c1 == null) {
            return null;
        }
        return c1.getNaam();
    }
}
