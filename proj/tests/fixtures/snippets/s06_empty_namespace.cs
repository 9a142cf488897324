namespace A { }
