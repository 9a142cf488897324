// note
public int x;
