import sqlite3
import json
import logging

import lab_config
from DistanceLab import DistanceReport

# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)

class ResultStore:
    """
    The ResultStore class keeps finished distance searches and structure-suite runs
    in a sqlite file, so a long exhaustive search is not repeated.
    """
    def __init__(self, db_name=lab_config.RESULT_DB):
        self.db_name = db_name

    def setup_databases(self):
        """Initialize the SQLite database."""
        with sqlite3.connect(self.db_name) as conn:
            cursor = conn.cursor()
            # Budgets are stored as text: they may exceed 64 bits.
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS distance_reports (
                    preset TEXT NOT NULL,
                    budget TEXT NOT NULL,
                    d_lower INTEGER NOT NULL,
                    d_lower_source TEXT NOT NULL,
                    d_upper INTEGER,
                    d_upper_source TEXT,
                    exact BOOL NOT NULL,
                    notes TEXT,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    PRIMARY KEY (preset, budget)
                )
            ''')
            # One row per proposition per structure-suite run
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS verification_runs (
                    id INTEGER PRIMARY KEY,
                    q INTEGER NOT NULL,
                    proposition TEXT NOT NULL,
                    status TEXT NOT NULL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            ''')

    # MARK: Distance reports
    def save_distance(self, preset, budget, report):
        """Store a distance report, replacing any earlier one for the same preset and budget."""
        try:
            with sqlite3.connect(self.db_name) as conn:
                cursor = conn.cursor()
                cursor.execute(
                    'INSERT OR REPLACE INTO distance_reports '
                    '(preset, budget, d_lower, d_lower_source, d_upper, d_upper_source, exact, notes) '
                    'VALUES (?, ?, ?, ?, ?, ?, ?, ?)',
                    (preset, str(budget), report.d_lower, report.d_lower_source, report.d_upper,
                     report.d_upper_source, report.exact, json.dumps(report.notes))
                )
                conn.commit()
                return True
        except sqlite3.Error as e:
            logger.error(f"Database error while saving distance for {preset}: {str(e)}")
            return False

    def load_distance(self, preset, budget):
        """An exact report for the preset under any budget, else the report stored for this budget."""
        try:
            with sqlite3.connect(self.db_name) as conn:
                conn.row_factory = sqlite3.Row
                cursor = conn.cursor()
                cursor.execute(
                    'SELECT * FROM distance_reports WHERE preset = ? AND (exact = 1 OR budget = ?) '
                    'ORDER BY exact DESC, created_at DESC LIMIT 1',
                    (preset, str(budget))
                )
                row = cursor.fetchone()
                if row is None:
                    return None
                return DistanceReport(
                    d_lower=row["d_lower"],
                    d_lower_source=row["d_lower_source"],
                    d_upper=row["d_upper"],
                    d_upper_source=row["d_upper_source"],
                    notes=json.loads(row["notes"] or "[]"),
                )
        except sqlite3.Error as e:
            logger.error(f"Database error while loading distance for {preset}: {str(e)}")
            return None

    # MARK: Verification runs
    def record_verification(self, q, results):
        """Store every result of one structure-suite run in a single transaction."""
        try:
            with sqlite3.connect(self.db_name) as conn:
                cursor = conn.cursor()

                # Start a transaction
                cursor.execute('BEGIN TRANSACTION')
                try:
                    for result in results:
                        cursor.execute(
                            'INSERT INTO verification_runs (q, proposition, status) VALUES (?, ?, ?)',
                            (q, result.proposition_id, result.status)
                        )
                    conn.commit()
                    logger.info(f"Recorded {len(results)} results for q = {q}")
                    return True

                except sqlite3.Error as e:
                    # If any error occurs, rollback the transaction
                    cursor.execute('ROLLBACK')
                    logger.error(f"Error recording verification run: {str(e)}")
                    return False
        except sqlite3.Error as e:
            logger.error(f"Database error: {str(e)}")
            return False

    def verification_history(self, q):
        """All recorded (proposition, status) pairs for q, oldest first."""
        try:
            with sqlite3.connect(self.db_name) as conn:
                cursor = conn.cursor()
                cursor.execute('SELECT proposition, status FROM verification_runs WHERE q = ? ORDER BY id ASC', (q,))
                return cursor.fetchall()
        except sqlite3.Error as e:
            logger.error(f"Database error fetching history for q = {q}: {str(e)}")
            return []
