import os

GATE_THREADS = int(os.getenv("BOLTZMANN_GATE_THREADS", 0)) or None
DEFAULT_ALPHA = float(os.getenv("BOLTZMANN_GATE_ALPHA", 0.01))
DEFAULT_MIN_SAMPLES = int(os.getenv("BOLTZMANN_GATE_MIN_SAMPLES", 3))
LOG_LEVEL = os.getenv("BOLTZMANN_GATE_LOG_LEVEL", "INFO")

REPORT_FORMAT_VERSION = "boltzmann-gate/1"
RNG_IDENTITY = "numpy.random.PCG64 seeded by SeedSequence(seed, spawn_key=(cell_index,))"

# Log-odds and frequency stderr assigned to exact (noise-free) families.
STDERR_FLOOR = 1e-12
