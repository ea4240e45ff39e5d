"""loopsmith: synthesize SCoP loop nests, retrieve loop-aware demonstrations,
and drive an LLM through compile/test/rank feedback to produce verified,
faster loop code."""

__version__ = "0.1.0"
