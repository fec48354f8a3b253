import pytest

# chart tests only run where the viz package is installed; the analyzer's
# own suite must stay green without it
pytest.importorskip("txconflict_viz")
