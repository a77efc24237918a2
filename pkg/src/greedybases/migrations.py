import sqlite3

try:
    from .paths import get_db_path
except ImportError:
    from paths import get_db_path


def init_db():
    """Create the database and the runs table if they do not exist."""
    db_path = get_db_path()
    db_path.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(db_path)
    cursor = conn.cursor()

    cursor.execute('''
        CREATE TABLE IF NOT EXISTS runs (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            space TEXT NOT NULL,
            suite TEXT NOT NULL,
            seed INTEGER,
            corpus_size INTEGER,
            status TEXT, -- pass, fail
            violations INTEGER DEFAULT 0,
            report TEXT,
            created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
        )
    ''')

    conn.commit()
    conn.close()

