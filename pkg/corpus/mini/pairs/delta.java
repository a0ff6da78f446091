public class FormatNaam {
    public String formatNaam(String naam) {
        if (naam == null) {
            return "onbekend";
        }
        return naam.substring(0, 1).toUpperCase() + naam.substring(1).toLowerCase();
    }
}
