# Core package for shared numerical and I/O helpers

VERSION = "0.1.0"
