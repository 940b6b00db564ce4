import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: testes de aceitação demorados (Monte Carlo, N=2, n até 2^12)")
