// Mesh vertex with a position and valence bookkeeping.
using System;

namespace GeomKernel
{
    public class Vertex
    {
        private double x;
        private double y;
        private int valence;

        public Vertex(double px, double py)
        {
            x = px;
            y = py;
            valence = 0;
        }

        public double X
        {
            get { return x; }
        }

        public double Y
        {
            get { return y; }
        }

        public int Valence
        {
            get { return valence; }
            set { valence = value; }
        }

        public double DistanceTo(Vertex other)
        {
            double dx = other.X - x;
            double dy = other.Y - y;
            return Math.Sqrt(dx * dx + dy * dy);
        }

        public void Connect()
        {
            valence++;
        }

        public void Disconnect()
        {
            if (valence > 0)
            {
                valence--;
            }
        }
    }
}
