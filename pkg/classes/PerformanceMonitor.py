import time
import logging
import threading
import statistics
from collections import deque
from typing import Dict, Optional

import psutil


class PerformanceMonitor:
    """
    Performance monitor for the expensive semigroup operations.
    Tracks durations per operation name, search counters and memory.
    """

    def __init__(self):
        self.logger = logging.getLogger('PerformanceMonitor')

        # Thread-safe storage for durations and counters
        self.lock = threading.Lock()

        # Function execution times, name -> deque of ms
        self.function_times = {}

        # Search counters
        self.session_start_time = time.time()
        self.signatures_evaluated = 0
        self.search_nodes = 0
        self.peak_rss_mb = 0.0

        self.process = psutil.Process()

        self.logger.debug("PerformanceMonitor initialized")

    def record_function_time(self, function_name: str, execution_time_seconds: float):
        """Record function execution time"""
        with self.lock:
            execution_time_ms = execution_time_seconds * 1000

            if function_name not in self.function_times:
                self.function_times[function_name] = deque(maxlen=1000)

            self.function_times[function_name].append(execution_time_ms)
        self.sample_memory()

    def add_signatures(self, count: int):
        """Count signature evaluations done by an expansion"""
        with self.lock:
            self.signatures_evaluated += count

    def add_search_nodes(self, count: int):
        """Count nodes visited by a backtracking search"""
        with self.lock:
            self.search_nodes += count

    def sample_memory(self) -> float:
        """Sample resident memory in MB and keep the peak"""
        try:
            rss_mb = self.process.memory_info().rss / (1024 * 1024)
        except psutil.Error as e:
            self.logger.debug(f"Memory sample failed: {e}")
            return self.peak_rss_mb
        with self.lock:
            self.peak_rss_mb = max(self.peak_rss_mb, rss_mb)
        return rss_mb

    def reset(self):
        with self.lock:
            self.function_times = {}
            self.signatures_evaluated = 0
            self.search_nodes = 0
            self.session_start_time = time.time()

    def get_latency_stats(self) -> Dict:
        """Get current duration statistics per operation"""
        with self.lock:
            stats = {
                'session_seconds': round(time.time() - self.session_start_time, 3),
                'signatures_evaluated': self.signatures_evaluated,
                'search_nodes': self.search_nodes,
                'peak_rss_mb': round(self.peak_rss_mb, 1),
                'operations': {}
            }

            for name in sorted(self.function_times):
                times = self.function_times[name]
                if not times:
                    continue
                stats['operations'][name] = {
                    'avg_ms': round(statistics.mean(times), 3),
                    'min_ms': round(min(times), 3),
                    'max_ms': round(max(times), 3),
                    'p95_ms': round(statistics.quantiles(times, n=20)[18] if len(times) >= 20 else statistics.mean(times), 3),
                    'count': len(times)
                }

            return stats

    def get_performance_summary(self) -> str:
        """Generate a human-readable performance summary"""
        stats = self.get_latency_stats()

        summary = [
            "="*60,
            "PERFORMANCE SUMMARY",
            "="*60,
            f"Session Duration: {stats['session_seconds']:.2f} seconds",
            f"Signatures Evaluated: {stats['signatures_evaluated']:,}",
            f"Search Nodes: {stats['search_nodes']:,}",
            f"Peak Memory: {stats['peak_rss_mb']:.1f} MB",
            ""
        ]

        for name, data in stats['operations'].items():
            summary.extend([
                f"{name}:",
                f"  Average: {data['avg_ms']:.2f}ms",
                f"  95th Percentile: {data['p95_ms']:.2f}ms",
                f"  Min/Max: {data['min_ms']:.2f}ms / {data['max_ms']:.2f}ms",
                f"  Calls: {data['count']:,}",
                ""
            ])

        summary.append("="*60)

        return "\n".join(summary)

    def log_performance_report(self):
        """Log the current performance report"""
        self.logger.info("\n" + self.get_performance_summary())

    def get_average_time(self, function_name: str) -> Optional[float]:
        with self.lock:
            times = self.function_times.get(function_name)
            if not times:
                return None
            return statistics.mean(times)


# Create global performance monitor instance
performance_monitor = PerformanceMonitor()
