public class BoekOver {
    private final Repository repository;

    public BoekOver(Repository repository) {
        this.repository = repository;
    }

    public void boekOver(long van, long naar, Money bedrag) {
        Account bron = repository.findAccount(van);
        Account doel = repository.findAccount(naar);
        bron.setSaldo(bron.getSaldo().subtract(bedrag));
        doel.setSaldo(doel.getSaldo().add(bedrag));
        repository.saveAccount(bron);
        repository.saveAccount(doel);
    }
}
