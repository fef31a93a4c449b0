"""Novobo: a teachable mentee-agent engine for instructional-gesture mentoring.

Teacher study groups pose teaching scenarios; a knowledge-grounded two-agent
pipeline proposes instructional gestures; the group rates them, demonstrates
a gesture as a skeletal recording, and explains it; the mentee summarizes the
principles it was taught. The engine exposes this loop over an HTTP API and a
CLI.
"""

__version__ = "0.1.0"
