# output/table.py
import logging
import math

# Set up custom logging with file details
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

# Create console handler
handler = logging.StreamHandler()
handler.setLevel(logging.INFO)

# Create formatter with file details in brackets
formatter = logging.Formatter('[%(filename)s:%(lineno)d] %(levelname)s: %(message)s')
handler.setFormatter(formatter)

# Add handler to logger
logger.addHandler(handler)

WIDTH = 72


def format_crossing(iteration):
    return "never" if iteration is None else str(iteration)


def render_summary(cfg, summary):
    s, a = cfg.scenario, cfg.algo
    lines = []
    lines.append("APGT EXPERIMENT SUMMARY")
    lines.append(f"L : {s.L} | K* : {s.K_star} | K : {a.K} | q : {a.q} | sigma2 : {s.sigma2:g}")
    lines.append(f"Rule : {a.rule.token()} | Realizations : {cfg.realizations} | Iterations : {s.N}")
    lines.append("=" * WIDTH)
    lines.append(f"{'Final MSE':<28} {summary.final_mse:.6e}")
    lines.append(f"{'MSE (dB)':<28} {_db(summary.final_mse)}")
    lines.append(f"{'Seconds / iteration':<28} {summary.seconds_per_iteration:.3e}")
    lines.append("-" * WIDTH)
    lines.append(f"{'MSE THRESHOLD':<28} FIRST ITERATION")
    for threshold, iteration in summary.crossings.items():
        lines.append(f"{threshold:<28g} {format_crossing(iteration)}")
    if summary.path:
        lines.append("-" * WIDTH)
        lines.append(f"CSV : {summary.path}")
    lines.append("=" * WIDTH)

    table_text = "\n".join(lines)
    logger.info(table_text)
    return table_text


def render_bench(frame):
    lines = []
    lines.append("APGT PER-ITERATION COST")
    lines.append("=" * WIDTH)
    lines.append(f"{'L':<8} {'K':<6} {'NS/ITER':<14} {'RATIO':<8} {'MODEL MULTS':<12}")
    lines.append("-" * WIDTH)
    for row in frame.to_dict("records"):
        ratio = row.get("ratio")
        ratio_text = "-" if ratio is None or math.isnan(ratio) else f"{ratio:.2f}"
        mults = row.get("model_multiplications")
        mults_text = "-" if mults is None or (isinstance(mults, float) and math.isnan(mults)) else f"{int(mults)}"
        lines.append(
            f"{int(row['L']):<8} {int(row['K']):<6} {row['ns_per_iteration']:<14.0f} {ratio_text:<8} {mults_text:<12}"
        )
    lines.append("=" * WIDTH)

    table_text = "\n".join(lines)
    logger.info(table_text)
    return table_text


def _db(value):
    if value is None or math.isnan(value):
        return "n/a"
    if value <= 0:
        return "-inf"
    return f"{10 * math.log10(value):.2f}"
