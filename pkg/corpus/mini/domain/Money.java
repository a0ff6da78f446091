public record Money(long cents, String currency) {
    public Money add(Money other) {
        return new Money(cents + other.cents(), currency);
    }

    public Money subtract(Money other) {
        return new Money(cents - other.cents(), currency);
    }
}
