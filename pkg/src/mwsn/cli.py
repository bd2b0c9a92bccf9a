"""Command-line interface: ``mwsn <subcommand> [flags]``."""
import argparse
import logging
import sys
from pathlib import Path

from . import tensorio
from .classifier import LinearModel, SvmParams, cross_validate, predict, train
from .config import load_config
from .dataset import load_image, read_manifest, write_synthetic
from .errors import InvalidInputError, MWSNError
from .features import PcaModel, pca_fit, pca_transform
from .pipeline import extract_features, path_order_lines
from .scattering import scatter
from .viz import layer1_mosaic, layer2_mosaic, save_png

FEATURES = "features.mwsf"
LABELS = "labels.txt"
PATHS = "paths.txt"

def _add_run_flags(p):
    g = p.add_argument_group("run configuration (flags override --config)")
    g.add_argument("--config", type=Path, help="key=value configuration file")
    g.add_argument("--scales", dest="J", type=int, help="number of scales J (default 4)")
    g.add_argument("--rate-u", dest="r_u", type=int, help="subsampling after modulus (default 2)")
    g.add_argument("--rate-s", dest="r_s", type=int, help="subsampling after averaging (default 2)")
    g.add_argument("--crop", type=int, help="central crop size (default 200)")
    g.add_argument("--pca-k", dest="pca_k", type=int, help="PCA coordinates kept (default 30)")
    g.add_argument("--folds", type=int, help="cross-validation folds (default 2)")
    g.add_argument("--repeats", type=int, help="cross-validation repeats (default 10)")
    g.add_argument("--c-reg", dest="C", type=float, help="SVM regularization C (default 1.0)")
    g.add_argument("--seed", type=int, help="random seed (default 0)")
    g.add_argument("--workers", type=int, help="worker processes (default: all cores)")

def _config(args):
    keys = ("J", "r_u", "r_s", "crop", "pca_k", "folds", "repeats", "C", "seed", "workers")
    return load_config(args.config, **{k: getattr(args, k, None) for k in keys})

def read_labels(path):
    path = Path(path)
    if path.suffix == ".csv":
        return read_manifest(path).labels
    return [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]

def write_lines(path, lines):
    Path(path).write_text("".join(f"{ln}\n" for ln in lines), encoding="utf-8")

def _load_features(path):
    X = tensorio.load(path)
    if X.ndim != 2:
        raise InvalidInputError(f"{path}: expected a 2D feature matrix, got shape {X.shape}")
    return X

def cmd_scatter(args):
    cfg = _config(args)
    manifest = read_manifest(args.manifest)
    if len(manifest) == 0:
        raise InvalidInputError("empty dataset")
    scfg = cfg.scattering
    scfg.check_size(cfg.crop)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    targets = [out / FEATURES, out / LABELS, out / PATHS]
    try:
        X = extract_features(manifest.paths, scfg, cfg.crop, cfg.n_workers)
        tensorio.save(targets[0], X)
        write_lines(targets[1], manifest.labels)
        write_lines(targets[2], path_order_lines(cfg.crop, scfg))
    except BaseException:
        for t in targets:
            t.unlink(missing_ok=True)
        raise
    print(f"wrote {X.shape[0]} rows of length {X.shape[1]} to {targets[0]}")

def _save_pca(model, out):
    out.mkdir(parents=True, exist_ok=True)
    tensorio.save(out / "pca_mean.mwsf", model.mean)
    tensorio.save(out / "pca_components.mwsf", model.components)
    tensorio.save(out / "pca_explained.mwsf", model.explained)

def load_pca(directory):
    d = Path(directory)
    return PcaModel(
        mean=tensorio.load(d / "pca_mean.mwsf"),
        components=tensorio.load(d / "pca_components.mwsf"),
        explained=tensorio.load(d / "pca_explained.mwsf"),
    )

def cmd_pca_fit(args):
    cfg = _config(args)
    model = pca_fit(_load_features(args.features), cfg.pca_k)
    _save_pca(model, Path(args.out))
    print(f"kept {model.k} of {model.d} dimensions; explained variance {model.explained.sum():.6g}")

def cmd_pca_apply(args):
    Z = pca_transform(load_pca(args.model), _load_features(args.features))
    tensorio.save(args.out, Z)
    print(f"wrote {Z.shape[0]}x{Z.shape[1]} coordinates to {args.out}")

def _labels_for(args, n):
    labels = read_labels(args.labels)
    if len(labels) != n:
        raise InvalidInputError(f"{len(labels)} labels for {n} feature rows")
    return labels

def save_model(model, out):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    tensorio.save(out / "weights.mwsf", model.W)
    tensorio.save(out / "bias.mwsf", model.b)
    write_lines(out / "classes.txt", model.classes)
    p = model.params
    write_lines(out / "params.txt", [f"C={p.C!r}", f"max_iter={p.max_iter}", f"tol={p.tol!r}", f"seed={p.seed}"])

def load_model(directory):
    d = Path(directory)
    classes = tuple(read_labels(d / "classes.txt"))
    kv = dict(ln.split("=", 1) for ln in read_labels(d / "params.txt"))
    params = SvmParams(C=float(kv["C"]), max_iter=int(kv["max_iter"]), tol=float(kv["tol"]), seed=int(kv["seed"]))
    return LinearModel(classes, tensorio.load(d / "weights.mwsf"), tensorio.load(d / "bias.mwsf"), params)

def cmd_train(args):
    cfg = _config(args)
    X = _load_features(args.features)
    model = train(X, _labels_for(args, X.shape[0]), SvmParams(C=cfg.C, seed=cfg.seed))
    save_model(model, args.out)
    print(f"trained {len(model.classes)} one-vs-rest classifiers on {X.shape[0]}x{X.shape[1]} features")

def cmd_predict(args):
    X = _load_features(args.features)
    labels = predict(load_model(args.model), X)
    if args.out:
        write_lines(args.out, labels)
    else:
        sys.stdout.write("".join(f"{lbl}\n" for lbl in labels))

def cmd_evaluate(args):
    cfg = _config(args)
    X = _load_features(args.features)
    labels = _labels_for(args, X.shape[0])
    report = cross_validate(
        X, labels, folds=cfg.folds, repeats=cfg.repeats, pca_k=cfg.pca_k,
        seed=cfg.seed, params=SvmParams(C=cfg.C, seed=cfg.seed),
    )
    rows = ["repeat,fold,accuracy"] + [f"{r},{f},{a:.10f}" for r, f, a in report.rows()]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_lines(out / "report.csv", rows)
        write_lines(out / "report.txt", [report.summary()])
    print(report.summary())
    print(f"mean accuracy {report.mean:.3f} +/- {report.std:.3f}")

def cmd_synth(args):
    cfg = _config(args)
    m = write_synthetic(args.out, args.n_classes, args.n_per_class, args.size, cfg.seed)
    print(f"wrote {len(m)} images and {Path(args.out) / 'manifest.csv'}")

def cmd_viz(args):
    cfg = _config(args)
    img = load_image(args.image, cfg.crop)
    scfg = cfg.scattering
    scfg.check_size(img.shape[0])
    out = scatter(img, scfg)
    per_block = not args.global_norm
    target = Path(args.out)
    target.parent.mkdir(parents=True, exist_ok=True)
    save_png(layer2_mosaic(out, per_block), target)
    layer1 = target.with_name(target.stem + "_layer1" + (target.suffix or ".png"))
    save_png(layer1_mosaic(out, per_block), layer1)
    print(f"wrote {target} and {layer1}")

def build_parser():
    parser = argparse.ArgumentParser(prog="mwsn", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="layer-2 scattering features for a manifest")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="output directory")
    _add_run_flags(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("pca-fit", help="fit PCA on a feature file")
    p.add_argument("--features", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="model directory")
    _add_run_flags(p)
    p.set_defaults(func=cmd_pca_fit)

    p = sub.add_parser("pca-apply", help="project features with a fitted PCA")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--features", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="output tensor file")
    p.set_defaults(func=cmd_pca_apply)

    p = sub.add_parser("train", help="train the linear classifier")
    p.add_argument("--features", required=True, type=Path)
    p.add_argument("--labels", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="model directory")
    _add_run_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="apply a trained classifier")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--features", required=True, type=Path)
    p.add_argument("--out", type=Path, help="label file (default: stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="repeated stratified cross-validation")
    p.add_argument("--features", required=True, type=Path)
    p.add_argument("--labels", required=True, type=Path)
    p.add_argument("--out", type=Path, help="directory for report.csv / report.txt")
    _add_run_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate synthetic oriented textures")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--n-classes", type=int, default=4)
    p.add_argument("--n-per-class", type=int, default=40)
    p.add_argument("--size", type=int, default=160)
    _add_run_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("viz", help="render layer-1 and layer-2 coefficient mosaics")
    p.add_argument("--image", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="layer-2 mosaic PNG")
    p.add_argument("--global-norm", action="store_true", help="one intensity range for all blocks")
    _add_run_flags(p)
    p.set_defaults(func=cmd_viz)
    return parser

def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except MWSNError as exc:
        print(f"mwsn {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0

if __name__ == "__main__":
    sys.exit(main())
