import json
import logging
from logging.handlers import RotatingFileHandler
import os
import time
import functools

# Limits configuration
config_path = os.path.join(os.path.dirname(os.path.dirname(__file__)), "config-limits.json")
try:
    with open(config_path) as f:
        CONFIG_LIMITS = json.load(f)
except FileNotFoundError:
    CONFIG_LIMITS = {}

# Search and construction limits
DEFAULT_BUDGET = int(CONFIG_LIMITS.get("Budget", 1_000_000))  # signature evaluations / search nodes
DEFAULT_MAX_LENGTH = int(CONFIG_LIMITS.get("MaxLength", 6))  # word length L for probes
DEFAULT_TOWER_DEPTH = int(CONFIG_LIMITS.get("TowerDepth", 2))  # tower levels N
DEFAULT_CAP = int(CONFIG_LIMITS.get("Cap", 4))  # alternation blocks in truncated products
MAX_PRODUCT_ORDER = int(CONFIG_LIMITS.get("MaxProductOrder", 100_000))
MAX_TABLE_CELLS = int(CONFIG_LIMITS.get("MaxTableCells", 25_000_000))  # n² entries of a built table
FULL_ASSOCIATIVITY_LIMIT = int(CONFIG_LIMITS.get("FullAssociativityLimit", 300))

# Reporting
SLOW_OPERATION_MS = float(CONFIG_LIMITS.get("SlowOperationMs", 100))
LOG_LEVEL = getattr(logging, str(CONFIG_LIMITS.get("LogLevel", "INFO")).upper(), logging.INFO)
LOG_DIR = CONFIG_LIMITS.get("LogDir", "logs")

# Exit code contract of the CLI
EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_BUDGET = 2
EXIT_INPUT_ERROR = 3

# Display symbol of the adjoined identity of S^I
IDENTITY_SYMBOL = "I"


def setup_logging(level=None, log_dir=None):
    """Setup logging for the CLI: stderr plus a rotating file"""

    logs_path = log_dir or os.path.join(os.path.dirname(os.path.dirname(__file__)), LOG_DIR)
    if not os.path.exists(logs_path):
        os.makedirs(logs_path)

    logging.basicConfig(
        level=level if level is not None else LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(),  # stderr, stdout is reserved for reports
            RotatingFileHandler(os.path.join(logs_path, 'sgrp.log'), maxBytes=10*1024*1024, backupCount=3)
        ],
        force=True
    )
    return logging.getLogger('main')


def timing_decorator(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        # Imported here: PerformanceMonitor imports this module
        from .PerformanceMonitor import performance_monitor

        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            execution_time = time.perf_counter() - start_time
            performance_monitor.record_function_time(func.__name__, execution_time)

            if execution_time * 1000 > SLOW_OPERATION_MS:
                logging.getLogger('timing').warning(f"Slow operation: {func.__name__} took {execution_time*1000:.2f}ms")

            return result
        except Exception as e:
            execution_time = time.perf_counter() - start_time
            logging.getLogger('timing').debug(f"{func.__name__} raised {type(e).__name__}: {e} (took {execution_time*1000:.2f}ms)")
            raise
    return wrapper
