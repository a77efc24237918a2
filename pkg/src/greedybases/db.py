import sqlite3
from datetime import datetime
from typing import Optional, List, Dict, Any

try:
    from .paths import get_db_path
except ImportError:
    from paths import get_db_path


def _get_db_connection():
    conn = sqlite3.connect(get_db_path())
    conn.row_factory = sqlite3.Row  # Allows accessing columns by name
    return conn


def add_run(
    space: str,
    suite: str,
    seed: int,
    status: str,
    violations: int,
    report: str,
    corpus_size: Optional[int] = None,
) -> int:
    """Insert a new verify run record."""
    conn = _get_db_connection()
    cursor = conn.cursor()
    cursor.execute('''
        INSERT INTO runs (space, suite, seed, corpus_size, status, violations, report, created_at)
        VALUES (?, ?, ?, ?, ?, ?, ?, ?)
    ''', (space, suite, seed, corpus_size, status, violations, report, datetime.now()))
    new_id = cursor.lastrowid
    conn.commit()
    conn.close()
    return new_id


def list_runs(limit: int = 50, offset: int = 0, space: Optional[str] = None) -> List[Dict[str, Any]]:
    """Runs without their report body, newest first."""
    conn = _get_db_connection()
    cursor = conn.cursor()
    query = "SELECT id, space, suite, seed, corpus_size, status, violations, created_at FROM runs"
    params: list = []
    if space:
        query += " WHERE space = ?"
        params.append(space)
    query += " ORDER BY id DESC LIMIT ? OFFSET ?"
    params.extend([limit, offset])
    cursor.execute(query, params)
    rows = [dict(row) for row in cursor.fetchall()]
    conn.close()
    return rows


def get_run(run_id: int) -> Optional[Dict[str, Any]]:
    conn = _get_db_connection()
    cursor = conn.cursor()
    cursor.execute("SELECT * FROM runs WHERE id = ?", (run_id,))
    row = cursor.fetchone()
    conn.close()
    return dict(row) if row else None


def delete_run(run_id: int) -> bool:
    """Delete a run. Returns False when no such run exists."""
    conn = _get_db_connection()
    cursor = conn.cursor()
    cursor.execute("DELETE FROM runs WHERE id = ?", (run_id,))
    deleted = cursor.rowcount > 0
    conn.commit()
    conn.close()
    return deleted
