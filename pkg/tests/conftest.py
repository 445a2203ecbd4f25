import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from anharm import PrecisionContext


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(target_digits=30, guard_digits=15)
