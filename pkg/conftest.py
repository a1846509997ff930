import os
import sys

# modules import each other as utils.* and app_components.*
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
