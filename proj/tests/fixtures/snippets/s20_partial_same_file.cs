namespace P
{
    public partial class Part { void A() { } }
    partial class Part { void B() { } }
}
namespace P
{
    class Other { }
}
