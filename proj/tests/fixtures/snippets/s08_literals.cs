class L
{
    string s = "a\"b";
    char c = '\n';
    string v = @"x""y";
    double d = 1.5e3;
    float f = 2f;
    long n = 0x1Fu;
    int i = 42;
}
