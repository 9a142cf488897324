enum Color { Red, Green }
class Money
{
    ~Money() { }
    public static Money operator +(Money a, Money b) { return a; }
    public static implicit operator int(Money m) { return 0; }
    public int this[int i] { get { return i; } }
    public int Cents;
}
