"""Dataset-level driver: images in, layer-2 feature rows out."""
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .dataset import load_image
from .errors import InvalidInputError
from .scattering import ScatteringConfig, layer2_paths, scatter_features


def _features_from_path(path, crop, cfg):
    return scatter_features(load_image(path, crop), cfg)


def extract_features(paths, cfg=None, crop=200, workers=1):
    """Scatter every image in ``paths``; rows follow the input order.

    With ``workers > 1`` images are spread over a process pool; results are
    still assembled in input order.
    """
    cfg = cfg or ScatteringConfig()
    paths = list(paths)
    if not paths:
        raise InvalidInputError("empty dataset")
    job = partial(_features_from_path, crop=crop, cfg=cfg)
    if workers <= 1 or len(paths) == 1:
        rows = [job(p) for p in paths]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, paths, chunksize=max(1, len(paths) // (4 * workers))))
    return np.vstack(rows)


def features_from_images(images, cfg=None):
    images = list(images)
    if not images:
        raise InvalidInputError("empty dataset")
    return np.vstack([scatter_features(img, cfg) for img in images])


def path_order_lines(n, cfg):
    """Sidecar text: one ``index,label,rows,cols`` line per layer-2 raster."""
    side = cfg.output_shapes(n)[2]
    lines = [f"# input {n}x{n} J={cfg.J} r_u={cfg.r_u} r_s={cfg.r_s}", "# index,path,rows,cols"]
    for i, p in enumerate(layer2_paths(cfg.J)):
        lines.append(f"{i},{p.label()},{side},{side}")
    return lines
