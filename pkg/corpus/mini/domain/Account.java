public class Account {
    private final long id;
    private final long customerId;
    private Money saldo;

    public Account(long id, long customerId, Money saldo) {
        this.id = id;
        this.customerId = customerId;
        this.saldo = saldo;
    }

    public long getId() {
        return id;
    }

    public long getCustomerId() {
        return customerId;
    }

    public Money getSaldo() {
        return saldo;
    }

    public void setSaldo(Money saldo) {
        this.saldo = saldo;
    }
}
