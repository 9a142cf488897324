namespace Ev
{
    public delegate void Handler(object sender, EventArgs e);
    public class Source
    {
        public event Handler Changed;
        delegate int Counter();
        protected void Raise() { Changed(this, null); }
    }
}
