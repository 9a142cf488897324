using System.Collections;

namespace GeomKernel.Cmds
{
    public class UndoStack
    {
        private ArrayList entries = new ArrayList();
        private int cursor;

        public void Push(ICommand command)
        {
            command.Execute();
            entries.Add(new Entry(command, cursor));
            cursor++;
        }

        public bool CanUndo
        {
            get { return cursor > 0; }
        }

        public void UndoLast()
        {
            if (CanUndo)
            {
                cursor--;
                Entry last = (Entry)entries[cursor];
                last.Command.Undo();
            }
        }

        public void Reset()
        {
            entries.Clear();
            cursor = 0;
        }

        private class Entry
        {
            public ICommand Command;
            public int Position;

            public Entry(ICommand command, int position)
            {
                Command = command;
                Position = position;
            }
        }
    }
}
