"""Figure scripts for capwaves CSV outputs.

One script per figure kind; every plotted number comes from a CSV cell or
the documented fit columns.  Images are deterministic SVG: fixed size, no
timestamps, fixed hash salt.
"""

__version__ = "0.1.0"
