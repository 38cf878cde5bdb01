"""Bundled synthetic benchmark corpus.

A deterministic, balanced, binary-labeled text corpus whose class signal
lives in topical content words. Camouflaging those words is exactly the
attack surface the engines target, which makes this corpus suitable for
reproducing attack/defense trends without shipping third-party data.
"""

from __future__ import annotations

from pathlib import Path

from .levels import SeedPath, derive_rng
from .pipeline import Instance, write_dataset

__all__ = ["CORPUS_SEED", "bundled_corpus", "write_bundled_corpus"]

CORPUS_SEED = 0x5EED0C0DE

_TOPIC_A = (
    "quasar nebula galaxy orbital telescope spectrum asteroid comet stellar cosmic "
    "gravity photon plasma redshift supernova satellite lunar martian eclipse meteor "
    "pulsar rocket thruster vacuum velocity astronaut observatory constellation "
    "interstellar magnetosphere radiation spectrometer trajectory wormhole singularity "
    "equinox solstice aurora cosmology exoplanet heliosphere ionosphere luminosity "
    "momentum neutrino parallax perihelion photosphere propulsion relativity spacecraft "
    "starlight sunspot tidal universe vortex zenith albedo apogee celestial docking "
    "ecliptic flyby horizon impactor jettison launch module orbiter payload reentry "
    "stardust titanium umbra voyager xenon zodiac gyroscope antenna booster capsule "
    "fairing gantry hangar nozzle thrust telemetry transponder uplink viewport airlock"
).split()

_TOPIC_B = (
    "recipe saucepan garlic onion simmer braise roast pepper butter flour yeast dough "
    "oven skillet vinegar marinade basil oregano cinnamon nutmeg caramel chocolate "
    "vanilla pastry crust filling glaze frosting sugar honey lemon ginger turmeric "
    "saffron paprika cumin coriander parsley thyme rosemary sage tarragon mustard "
    "noodle risotto polenta gnocchi lasagna ravioli tortilla burrito salsa guacamole "
    "avocado mango papaya coconut almond walnut pecan hazelnut pistachio cashew raisin "
    "apricot cherry blueberry raspberry strawberry watermelon zucchini eggplant "
    "broccoli cauliflower spinach arugula kale quinoa barley oatmeal pancake waffle "
    "muffin bagel croissant baguette sourdough chutney compote custard ganache praline "
    "sorbet streusel syrup teriyaki wasabi zest"
).split()

_SHARED = (
    "morning evening window garden village market journey weather wooden silver yellow "
    "purple gentle sudden quiet people family friend story letter music picture road "
    "river mountain valley bridge house street corner season winter summer spring "
    "autumn harbor meadow lantern whisper shadow"
).split()

_GLUE = (
    "the of a and in on with for to from by at over under near through after before "
    "while during"
).split()


def _compose_text(rng, vocab: list[str]) -> str:
    # One adjacent run of topical words carries the class signal; keyword
    # ranking favors longer stopword-free runs, so camouflage hits it first.
    n_sig = int(rng.integers(2, 5))
    n_pad = int(rng.integers(3, 10))
    signature = [vocab[int(rng.integers(len(vocab)))] for _ in range(n_sig)]
    chunks: list[str] = [" ".join(signature)]
    for _ in range(n_pad):
        word = _SHARED[int(rng.integers(len(_SHARED)))]
        if rng.random() < 0.7:
            word = f"{_GLUE[int(rng.integers(len(_GLUE)))]} {word}"
        chunks.append(word)
    at = int(rng.integers(len(chunks)))
    chunks[0], chunks[at] = chunks[at], chunks[0]
    text = " ".join(chunks)
    if rng.random() < 0.3:
        cut = max(1, len(chunks) // 2)
        text = " ".join(chunks[:cut]) + ", " + " ".join(chunks[cut:])
    return text[0].upper() + text[1:] + "."


def bundled_corpus(
    n_train: int = 4000, n_test: int = 1000, seed: int = CORPUS_SEED
) -> tuple[list[Instance], list[Instance]]:
    """The canonical train/test split: balanced labels, deterministic bytes."""
    splits = []
    for split, size in (("train", n_train), ("test", n_test)):
        rng = derive_rng(SeedPath(seed, f"corpus/{split}"))
        instances = []
        for i in range(size):
            label = i % 2
            vocab = _TOPIC_A if label == 0 else _TOPIC_B
            instances.append(
                Instance(id=f"{split[:2]}{i:05d}", text=_compose_text(rng, vocab), label=label)
            )
        splits.append(instances)
    return splits[0], splits[1]


def write_bundled_corpus(outdir: str | Path, **kwargs) -> tuple[Path, Path]:
    """Materialize the bundled corpus as train.jsonl / test.jsonl."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    train, test = bundled_corpus(**kwargs)
    train_path = outdir / "train.jsonl"
    test_path = outdir / "test.jsonl"
    write_dataset(train_path, train)
    write_dataset(test_path, test)
    return train_path, test_path
