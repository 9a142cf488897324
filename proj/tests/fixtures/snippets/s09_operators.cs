class Ops
{
    int M(int a, int b)
    {
        a <<= 2;
        b = a >> 1;
        return a != b && a >= b ? a : b ?? 0;
    }
}
