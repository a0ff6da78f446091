public class AddSaldo {
    private final Repository repository;

    public AddSaldo(Repository repository) {
        this.repository = repository;
    }

    public void addSaldo(long accountId, Money bedrag) {
        Account c2 = repository.findAccount(accountId);
        Money saldo = c2.getSaldo().add(bedrag);
        c2.setSaldo(saldo);
        repository.saveAccount(c2);
    }
}
