using System;
using GeomKernel;

namespace GeomKernel.CmdsCleanUp
{
    public class SplitVertexCommand : GeomKernel.Cmds.CommandBase
    {
        private Vertex vertex;
        private Vertex created;

        public SplitVertexCommand(Mesh mesh, Vertex v) : base(mesh)
        {
            vertex = v;
        }

        public override string Name
        {
            get { return "Split vertex"; }
        }

        protected override void Apply()
        {
            Init();
            created = mesh.AddVertex(vertex.X + 0.5, vertex.Y);
            mesh.AddEdge(vertex, created);
        }

        protected override void Revert()
        {
            created = null;
        }

        private void Init()
        {
            vertex.Valence = 0;
        }

        // Menu handler.
        public void SplitVertex(object sender, EventArgs e)
        {
            Init();
            Apply();
        }
    }
}
