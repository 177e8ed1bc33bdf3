public class Sums {
  public static void main(String[] args) {
    int i = 0;
    int total;
    total = 0;
    // add up the first ten squares
    while (i < 10) {
      total = total + i * i;
      i = i + 1;
    }
    if ((total / 5) == 57) System.out.println(1); else System.out.println(0);
    {
      int d = (total - 285) * 2;
      System.out.println(d);
    }
  }
}
