namespace GeomKernel.CmdsCleanUp { class C { void SplitVertex(object sender, EventArgs e) { Init(); } } }
