import java.util.List;

public interface Repository {
    Customer findCustomer(long id);

    List<Customer> allCustomers();

    Account findAccount(long id);

    void saveAccount(Account account);
}
