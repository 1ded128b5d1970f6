from twowaygym.definitions import TWOWAYGYM_VERSION as __version__
