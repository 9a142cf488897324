using System;
using System.Collections;

namespace GeomKernel
{
    /// <summary>
    /// Vertex and edge container. Raises Changed after every edit.
    /// </summary>
    public partial class Mesh
    {
        private ArrayList vertices = new ArrayList();
        private ArrayList edges = new ArrayList();
        public event MeshChangedHandler Changed;

        public Mesh()
        {
        }

        public Vertex AddVertex(double x, double y)
        {
            Vertex v = new Vertex(x, y);
            vertices.Add(v);
            OnChanged("vertex");
            return v;
        }

        public Edge AddEdge(Vertex a, Vertex b)
        {
            Edge e = new Edge(a, b);
            edges.Add(e);
            OnChanged("edge");
            return e;
        }

        public int VertexCount
        {
            get { return vertices.Count; }
        }

        public int EdgeCount
        {
            get { return edges.Count; }
        }

        protected void OnChanged(string what)
        {
            if (Changed != null)
            {
                Changed(this, new MeshEventArgs(what));
            }
        }
    }
}
