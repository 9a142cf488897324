using System;
using GeomKernel;
using GeomKernel.Cmds;
using GeomKernel.CmdsCleanUp;
using GeomKernel.View;

namespace GeomKernel.App
{
    public sealed class Program
    {
        private static UndoStack history = new UndoStack();

        public static void Main(string[] args)
        {
            Mesh mesh = new Mesh();
            Vertex a = mesh.AddVertex(0.0, 0.0);
            Vertex b = mesh.AddVertex(1.0, 0.0);
            Viewport view = new Viewport(mesh);
            history.Push(new SplitVertexCommand(mesh, a));
            history.UndoLast();
            view.Zoom(2.0);
            Report(mesh, args.Length);
        }

        private static void Report(Mesh mesh, int argc)
        {
            Console.WriteLine(mesh.VertexCount);
            Console.WriteLine(argc);
        }
    }
}
