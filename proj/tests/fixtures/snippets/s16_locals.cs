class R
{
    int total;
    void Run(int[] data)
    {
        int sum = 0, count;
        foreach (int d in data) { sum += d; }
        for (int k = 0; k < 3; k++) { count = k; }
        total = sum;
        this.total = Compute(data.Length);
    }
}
