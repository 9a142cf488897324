#region Setup
/* block
   comment */
using System;
#if DEBUG
namespace N
{
    // line comment
    [Serializable]
    public class P { }
}
#endif
