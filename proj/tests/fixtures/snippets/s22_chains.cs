class Chain
{
    Logger log;
    void Go(Config cfg)
    {
        log.Write(cfg.Name);
        Console.WriteLine();
        var x = Build().Result;
    }
}
