import os
import sys

# serverless builds run from api/, the modules live one level up
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from wsgi import application  # noqa: E402,F401
