"""Image ingestion, dataset manifests and synthetic oriented textures."""
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CropError, FormatError, IngestionError, InvalidInputError, StratificationError
from .spectral import filter_image, frequency_lattice

LUMA = (0.299, 0.587, 0.114)
DEFAULT_CROP = 200


def load_grayscale(path):
    """Read an 8-bit grayscale or RGB(A) raster into ``[0, 1]`` floats.

    Color is converted with the luma weights ``0.299, 0.587, 0.114``.
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            if mode == "1":
                im = im.convert("L")
                mode = "L"
            arr = np.asarray(im)
    except FileNotFoundError:
        raise IngestionError(path, "no such file") from None
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise IngestionError(path, f"cannot decode image ({exc})") from None

    if mode in ("L", "LA"):
        gray = arr[..., 0] if arr.ndim == 3 else arr
        return gray.astype(np.float64) / 255.0
    if mode in ("RGB", "RGBA"):
        rgb = arr[..., :3].astype(np.float64)
        return (LUMA[0] * rgb[..., 0] + LUMA[1] * rgb[..., 1] + LUMA[2] * rgb[..., 2]) / 255.0
    raise IngestionError(path, f"unsupported image mode {mode!r}")


def center_crop(img, size=DEFAULT_CROP):
    """Central ``size x size`` window; the top-left corner is floored."""
    img = np.asarray(img)
    if img.ndim != 2:
        raise InvalidInputError(f"expected a 2D image, got shape {img.shape}")
    h, w = img.shape
    if size < 1 or h < size or w < size:
        raise CropError(f"cannot crop {size}x{size} from {h}x{w} image")
    top, left = (h - size) // 2, (w - size) // 2
    return img[top:top + size, left:left + size].copy()


@dataclass
class DatasetManifest:
    """Ordered ``(relative path, label)`` pairs resolved against ``root``."""

    entries: list = field(default_factory=list)
    root: Path = Path(".")

    def __post_init__(self):
        self.root = Path(self.root)
        self.entries = [(str(p), str(lbl)) for p, lbl in self.entries]
        seen = set()
        for p, _ in self.entries:
            if p in seen:
                raise FormatError(f"duplicate manifest path {p!r}")
            seen.add(p)

    def __len__(self):
        return len(self.entries)

    @property
    def paths(self):
        return [self.root / p for p, _ in self.entries]

    @property
    def labels(self):
        return [lbl for _, lbl in self.entries]

    def check_for_cv(self, folds=2):
        counts = {}
        for lbl in self.labels:
            counts[lbl] = counts.get(lbl, 0) + 1
        small = {k: v for k, v in counts.items() if v < max(2, folds)}
        if small:
            raise StratificationError(f"classes with too few entries for {folds}-fold CV: {small}")


def read_manifest(path, root=None):
    """Parse ``relative/path,label`` lines; ``#`` starts a comment.

    Paths resolve against ``root``, defaulting to the manifest's directory.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestionError(path, f"cannot read manifest ({exc})") from None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rel, sep, label = line.rpartition(",")
        rel, label = rel.strip(), label.strip()
        if not sep or not rel or not label:
            raise FormatError(f"{path}:{lineno}: expected 'relative/path,label', got {raw!r}")
        entries.append((rel, label))
    return DatasetManifest(entries, root if root is not None else path.parent)


def write_manifest(manifest, path):
    lines = [f"{p},{lbl}" for p, lbl in manifest.entries]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_image(path, crop=DEFAULT_CROP):
    """Load, convert to grayscale and center-crop one image."""
    img = load_grayscale(path)
    try:
        return center_crop(img, crop)
    except CropError as exc:
        raise IngestionError(path, str(exc)) from None


# --- synthetic oriented textures -------------------------------------------

RADIAL_BAND = (np.pi / 8, np.pi / 2)


def wedge_mask(size, angle, half_width, band=RADIAL_BAND):
    """Boolean frequency mask of orientations within ``half_width`` of ``angle``.

    Orientation is the angle of ``(xi1, xi2)`` measured from the ``xi1``
    axis, taken modulo ``pi`` so the mask is symmetric under negation.
    """
    xi1, xi2 = frequency_lattice((size, size))
    radius = np.hypot(xi1, xi2)
    theta = np.arctan2(xi2, xi1)
    dist = np.abs(np.mod(theta - angle + np.pi / 2, np.pi) - np.pi / 2)
    return (dist < half_width) & (radius >= band[0]) & (radius <= band[1])


def synth_texture(n_classes, label, index, size, seed):
    """One unit-variance texture of class ``label``; deterministic per inputs."""
    rng = np.random.default_rng([int(seed), int(label), int(index)])
    noise = rng.standard_normal((size, size))
    mask = wedge_mask(size, label * np.pi / n_classes, np.pi / (2 * n_classes))
    tex = filter_image(noise, mask.astype(np.float64))
    tex -= tex.mean()
    return tex / tex.std()


def synth_textures(n_classes, n_per_class, size, seed=0):
    """Generate an oriented-texture dataset.

    Class ``c`` is white noise restricted to a frequency wedge at angle
    ``c * pi / n_classes`` (half-width ``pi / (2 n_classes)``) and radii in
    ``[pi/8, pi/2]``, normalized to unit variance.

    Returns
    -------
    entries : list of (str, str)
        ``("class{c}/img{i:03d}.png", "class{c}")`` pairs, class-major.
    images : list of ndarray
    """
    if not isinstance(n_classes, (int, np.integer)) or not 2 <= n_classes <= 8:
        raise InvalidInputError(f"n_classes must be in 2..8, got {n_classes!r}")
    if not isinstance(n_per_class, (int, np.integer)) or n_per_class < 0:
        raise InvalidInputError(f"n_per_class must be >= 0, got {n_per_class!r}")
    if not isinstance(size, (int, np.integer)) or size < 8 or size % 8:
        raise InvalidInputError(f"size must be a positive multiple of 8, got {size!r}")
    entries, images = [], []
    for c in range(n_classes):
        for i in range(n_per_class):
            entries.append((f"class{c}/img{i:03d}.png", f"class{c}"))
            images.append(synth_texture(n_classes, c, i, size, seed))
    return entries, images


def to_uint8(img, span=3.0):
    """Quantize a unit-variance texture, mapping ``[-span, span]`` to ``[0, 255]``."""
    scaled = (np.asarray(img) / (2 * span) + 0.5) * 255.0
    return np.clip(np.rint(scaled), 0, 255).astype(np.uint8)


def write_synthetic(out_dir, n_classes, n_per_class, size, seed=0):
    """Write PNGs and ``manifest.csv`` under ``out_dir``; returns the manifest."""
    out_dir = Path(out_dir)
    entries, images = synth_textures(n_classes, n_per_class, size, seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    for (rel, _), img in zip(entries, images):
        target = out_dir / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(to_uint8(img)).save(target)
    manifest = DatasetManifest(entries, out_dir)
    write_manifest(manifest, out_dir / "manifest.csv")
    return manifest
