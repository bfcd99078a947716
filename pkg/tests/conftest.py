import os
import sys

# make tests/_oracles.py importable regardless of invocation directory
sys.path.insert(0, os.path.dirname(__file__))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running scaling/acceptance checks")
