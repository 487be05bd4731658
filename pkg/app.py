import os

from flask import Flask, Response, abort, jsonify, request
from pydantic import ValidationError
from werkzeug.exceptions import HTTPException

from action import ActionError, act, gamma_sets, generator_for, verify_gamma
from armodel import LAYERS, ProjectiveError, ar_model
from chebrings import FoldingType, chebyshev_ring
from config import get_config
from models import IndecModel, MatrixModel, RunConfig, to_jsonable
from quiver import build_folding
from svg_utils import emit_svg
from tilting import TiltingError, cluster_gamma, complements, enumerate_tilting, tilted_orientation
from tropical import SEED_LAYERS, SignCoherenceError, gvector_table, walk
from verify import run_verify

# -------------------------
# Application Factory
# -------------------------
app = Flask(__name__)

# Load configuration
env = os.environ.get('FLASK_ENV', 'development')
cfg = get_config(env)
app.config.from_object(cfg)
app.json.ensure_ascii = False


# -------------------------
# Helpers
# -------------------------
def folding_type(name):
    """The folding type of a URL segment, or 404"""
    try:
        ftype = FoldingType.parse(name)
    except ValueError:
        abort(404, description=f"unknown folding type {name!r}")
    if ftype.name not in [t for t, _ in app.config['SUPPORTED_TYPES']]:
        abort(404, description=f"folding type {ftype.name} is not served")
    return ftype


def choice_arg(key, choices, default):
    value = request.args.get(key, default)
    if value not in choices:
        abort(400, description=f"{key} must be one of {', '.join(choices)}")
    return value


def word_arg():
    text = request.args.get("word", "")
    body = text.replace(",", "").replace("[", "").replace("]", "").strip()
    if any(c not in "01" for c in body):
        abort(400, description=f"mutation words use the blocks 0 and 1, got {text!r}")
    return tuple(int(c) for c in body)


def find_object(model, key, layer):
    key = key.strip()
    if layer == 'cluster' and key.startswith('S') and key[1:] in model.index:
        return model.shifted_projective(key[1:])
    if "," in key and all(part.strip().isdigit() for part in key.split(",")):
        return model.find([int(c) for c in key.split(",")], layer)
    return model.find(key, layer)


# -------------------------
# API Endpoints
# -------------------------
@app.route("/api/health")
def health():
    return jsonify({"status": "ok", "schema_version": app.config['REPORT_SCHEMA_VERSION']})


@app.route("/api/types")
def list_types():
    return jsonify({"types": [{"type": t, "label": label} for t, label in app.config['SUPPORTED_TYPES']]})


@app.route("/api/<name>/info")
def folding_info(name):
    ftype = folding_type(name)
    folding = build_folding(ftype)
    model = ar_model(ftype)
    ring = chebyshev_ring(ftype)
    return jsonify(to_jsonable({
        "type": ftype.name,
        "n": ftype.n,
        "folding": folding.to_json(),
        "basis": list(ring.labels),
        "small_basis": [str(b) for b in ring.small_basis],
        "coxeter_order": model.coxeter_order(),
        "indecomposables": len(model.module_indecs()),
    }))


@app.route("/api/<name>/ar")
def ar_objects(name):
    ftype = folding_type(name)
    layer = choice_arg("layer", LAYERS, "module")
    model = ar_model(ftype)
    objects = []
    for x in model.enumerate_indecs(layer):
        alpha, eps = model.root_of(x)
        objects.append({
            "object": IndecModel.from_value(model, x),
            "column": model.column(x),
            "dim": [int(c) for c in model.class_vector(x)],
            "dimproj": model.dimproj(x),
            "root": alpha,
            "eps": eps,
        })
    return jsonify(to_jsonable({"type": ftype.name, "layer": layer, "objects": objects}))


@app.route("/api/<name>/svg")
def ar_svg(name):
    ftype = folding_type(name)
    layer = choice_arg("layer", LAYERS, "module")
    text = emit_svg(build_folding(ftype), layer, None, app.config['SVG_SCALE'], app.config['SVG_DIGITS'])
    return Response(text, mimetype="image/svg+xml")


@app.route("/api/<name>/mutate")
def mutate_seed(name):
    ftype = folding_type(name)
    layer = choice_arg("layer", SEED_LAYERS, "standard")
    seeds = walk(ftype, layer, word_arg())
    last = seeds[-1]
    return jsonify(to_jsonable({
        "type": ftype.name,
        "layer": layer,
        "word": list(last.word),
        "B": MatrixModel.from_value(last.B),
        "C": MatrixModel.from_value(last.C),
        "G": MatrixModel.from_value(last.G),
        "seeds": [s.to_json() for s in seeds],
    }))


@app.route("/api/<name>/act")
def act_on_object(name):
    ftype = folding_type(name)
    layer = choice_arg("layer", LAYERS, "module")
    element = request.args.get("r")
    key = request.args.get("object")
    if not element or not key:
        abort(400, description="both r and object are required")
    model = ar_model(ftype)
    r = chebyshev_ring(ftype).parse(element)
    x = find_object(model, key, layer)
    image = act(model, r, x)
    return jsonify(to_jsonable({
        "element": r,
        "object": IndecModel.from_value(model, x),
        "result": [{"object": IndecModel.from_value(model, y), "multiplicity": c} for y, c in image.items()],
        "dimproj": model.dimproj(list(image.elements())),
    }))


@app.route("/api/<name>/generators")
def generator_sets(name):
    ftype = folding_type(name)
    model = ar_model(ftype)
    result = []
    for gamma_name, gamma in gamma_sets(model).items():
        check = verify_gamma(model, gamma_name, gamma)
        pairs = []
        for N in model.module_indecs():
            found = generator_for(model, gamma, N)
            pairs.append({
                "object": model.name(N),
                "generator": model.name(found[0]) if found else None,
                "r": found[1].r if found else None,
                "r_prime": found[1].r_prime if found else None,
            })
        result.append({
            "gamma": gamma_name,
            "members": [model.name(x) for x in gamma],
            "generates": check.generates,
            "tau_closed": check.tau_closed,
            "basic": check.basic,
            "root_bijection": check.root_bijection,
            "weight_one": check.weight_one,
            "pairs": pairs,
        })
    return jsonify(to_jsonable({"type": ftype.name, "generator_sets": result}))


@app.route("/api/<name>/tilting")
def tilting_objects(name):
    ftype = folding_type(name)
    model = ar_model(ftype)
    sets = gamma_sets(model, 'cluster')
    gamma_name = request.args.get("gamma") or sorted(sets)[0]
    gamma = cluster_gamma(model, gamma_name)
    key = request.args.get("object")
    if key:
        X = find_object(model, key, 'cluster')
        return jsonify({
            "type": ftype.name,
            "gamma": gamma_name,
            "object": model.name(X),
            "complements": [model.name(y) for y in complements(model, X, gamma)],
        })
    tilts = []
    for T in enumerate_tilting(model, gamma):
        T = sorted(T, key=model.column)
        tilts.append({
            "summands": [model.name(x) for x in T],
            "columns": [model.column(x) for x in T],
            "orientation": tilted_orientation(model, T),
        })
    return jsonify({"type": ftype.name, "gamma": gamma_name, "tilting": tilts})


@app.route("/api/<name>/gvectors")
def folded_gvectors(name):
    ftype = folding_type(name)
    model = ar_model(ftype)
    rows = [{
        "object": row["object"],
        "g": row["g"],
        "folded": row["folded"],
        "agrees": row["agrees"],
        "presentation": row["presentation"].to_json(),
    } for row in gvector_table(model)]
    return jsonify(to_jsonable({"type": ftype.name, "gvectors": rows}))


@app.route("/api/verify", methods=["POST"])
def verify_run():
    payload = request.get_json(silent=True)
    if not isinstance(payload, dict):
        abort(400, description="expected a JSON object body")
    run = RunConfig.from_config(cfg, **payload)
    report = run_verify(run, cfg)
    return Response(report.model_dump_json(), status=200 if report.ok else 422, mimetype="application/json")


# -------------------------
# Error Handlers
# -------------------------
@app.errorhandler(ValidationError)
def invalid_input(e):
    return jsonify({"error": "invalid input", "details": e.errors(include_url=False, include_context=False)}), 400


@app.errorhandler(KeyError)
@app.errorhandler(ValueError)
@app.errorhandler(TiltingError)
def bad_request_value(e):
    message = e.args[0] if e.args else str(e)
    return jsonify({"error": str(message)}), 400


@app.errorhandler(ActionError)
@app.errorhandler(ProjectiveError)
@app.errorhandler(SignCoherenceError)
def unprocessable(e):
    return jsonify({"error": str(e)}), 422


@app.errorhandler(400)
def bad_request(e):
    return jsonify({"error": e.description}), 400


@app.errorhandler(404)
def not_found(e):
    return jsonify({"error": e.description}), 404


@app.errorhandler(500)
def internal_error(e):
    original = getattr(e, "original_exception", None) or e
    app.logger.error(f"Internal error: {str(original)}")
    return jsonify({"error": "internal server error"}), 500


@app.errorhandler(HTTPException)
def http_error(e):
    return jsonify({"error": e.description}), e.code


# -------------------------
# Run Application
# -------------------------
if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("foldq JSON API")
    print("=" * 60)
    print(f"Environment: {env}")
    print(f"Access at: http://127.0.0.1:5000/api/health")
    print("=" * 60 + "\n")

    app.run(
        debug=app.config.get('DEBUG', True),
        host='127.0.0.1',
        port=5000,
        use_reloader=True
    )
