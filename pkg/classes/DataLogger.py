import time
import logging
import threading
import os
from collections import defaultdict, deque
from typing import Dict, List, Optional
from datetime import datetime

LEDGER_HEADER = "timestamp_ms,command,input_hash,verdict,exit_code,elapsed_ms\n"


class DataLogger:
    """
    Run ledger for the CLI: one CSV row per command run, appended to a dated
    file in the ledger directory. Keeps per-command elapsed statistics for
    the runs logged by this process.
    """

    def __init__(self, ledger_dir: str):
        self.logger = logging.getLogger('DataLogger')

        self.ledger_path = ledger_dir
        if not os.path.exists(self.ledger_path):
            os.makedirs(self.ledger_path)

        self.lock = threading.Lock()

        self.elapsed = defaultdict(lambda: deque(maxlen=1000))
        self.run_counts = defaultdict(int)

        self.ledger_file = None
        self.ledger_filepath = None
        self._initialize_log_file()

    def _initialize_log_file(self):
        """Open today's ledger file, writing the header if it is new"""
        current_date = datetime.now().strftime("%Y%m%d")
        filename = f"runs_{current_date}.log"
        self.ledger_filepath = os.path.join(self.ledger_path, filename)

        try:
            self.ledger_file = open(self.ledger_filepath, 'a', encoding='utf-8')
            if os.path.getsize(self.ledger_filepath) == 0:
                self.ledger_file.write(LEDGER_HEADER)
                self.ledger_file.flush()
            self.logger.debug(f"Run ledger initialized: {filename}")
        except OSError as e:
            self.logger.error(f"Error initializing run ledger {self.ledger_filepath}: {e}")
            self.ledger_file = None

    def log_run(self, command: str, input_hash: str, verdict: str, exit_code: int, elapsed_seconds: float):
        """
        Append one run to the ledger

        Args:
            command: CLI command name (info, kr, check, ...)
            input_hash: content hash of the input file(s)
            verdict: short verdict string, e.g. "holds", "fails", "budget"
            exit_code: process exit code
            elapsed_seconds: wall time of the command
        """
        try:
            with self.lock:
                timestamp_ms = int(time.time() * 1000)
                elapsed_ms = elapsed_seconds * 1000
                self.elapsed[command].append(elapsed_ms)
                self.run_counts[command] += 1

                verdict = verdict.replace(",", ";")
                log_entry = f"{timestamp_ms},{command},{input_hash},{verdict},{exit_code},{elapsed_ms:.3f}\n"

                if self.ledger_file is not None:
                    self.ledger_file.write(log_entry)
                    self.ledger_file.flush()

                self.logger.debug(f"Run logged: {command} verdict={verdict} exit={exit_code} elapsed={elapsed_ms:.2f}ms")

        except Exception as e:
            self.logger.error(f"Error logging run of {command}: {e}")

    def get_run_statistics(self, command: Optional[str] = None) -> Dict:
        """Get elapsed-time statistics for one or all commands"""
        stats = {}
        with self.lock:
            commands = [command] if command else sorted(self.run_counts)
            for name in commands:
                stats[name] = {
                    'runs': self.run_counts.get(name, 0),
                    'elapsed': self._calculate_stats(list(self.elapsed.get(name, [])))
                }
        return stats

    def _calculate_stats(self, values: List[float]) -> Dict:
        """Calculate statistical measures for elapsed times"""
        if not values:
            return {
                'count': 0,
                'avg_ms': 0.0,
                'min_ms': 0.0,
                'max_ms': 0.0,
                'p50_ms': 0.0,
                'p95_ms': 0.0
            }

        sorted_values = sorted(values)
        count = len(sorted_values)

        def percentile(data, p):
            index = int(p * (len(data) - 1))
            return data[index]

        return {
            'count': count,
            'avg_ms': sum(values) / count,
            'min_ms': sorted_values[0],
            'max_ms': sorted_values[-1],
            'p50_ms': percentile(sorted_values, 0.50),
            'p95_ms': percentile(sorted_values, 0.95)
        }

    def close_log_files(self):
        """Close the ledger file"""
        try:
            if self.ledger_file is not None:
                self.ledger_file.close()
                self.ledger_file = None
        except Exception as e:
            self.logger.error(f"Error closing run ledger: {e}")

    def __del__(self):
        self.close_log_files()
