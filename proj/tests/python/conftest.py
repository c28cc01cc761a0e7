import os
import sys

# when run through ctest the module lives in the cmake build tree
module_dir = os.environ.get("CLADSIM_MODULE_DIR")
if module_dir and module_dir not in sys.path:
    sys.path.insert(0, module_dir)
