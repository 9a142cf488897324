class Account
{
    private decimal balance;
    public decimal Balance
    {
        get { return balance; }
        set { balance = value; Audit(); }
    }
    public string Owner { get; set; }
}
