#!/usr/bin/env python3
import os
import sys

from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from beliefdyn.core.config import Config
from beliefdyn.engine.io import save_population
from beliefdyn.experiments.population import TOPIC_PRESETS, entropy_summary, topic_population

N_HUMANS = int(os.getenv("BELIEFDYN_POPULATION_SIZE", "200"))
SEED = int(os.getenv("BELIEFDYN_POPULATION_SEED", "0"))

if __name__ == "__main__":
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else Config.POPULATION_DIR)
    out_dir.mkdir(parents=True, exist_ok=True)
    for topic in sorted(TOPIC_PRESETS):
        profiles = topic_population(topic, n=N_HUMANS, seed=SEED)
        path = out_dir / f"{topic}.jsonl"
        save_population(path, profiles)
        mean, spread = entropy_summary(profiles)
        print(f"Wrote {len(profiles)} {topic} agents to {path} (entropy {mean:.3f} +/- {spread:.3f})")
    print("Topic populations are on disk.")
