public class CountActief {
    private final Repository repository;

    public CountActief(Repository repository) {
        this.repository = repository;
    }

    public long countActief() {
        long totaal = 0;
        for (Customer c1 : repository.allCustomers()) {
            if ("ACTIEF".equals(c1.getStatus())) {
                totaal = totaal + 1;
            }
        }
        return totaal;
    }
}
