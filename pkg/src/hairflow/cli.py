"""Command-line interface.

Subcommands mirror the pipeline stages; rasters travel as PGM/PPM,
orientation fields as ORF1, clouds as OCD1, paths and poses as JSON.
"""

import pathlib
import sys

import click
import numpy as np

from . import formats, synth, viz
from .errors import HairflowError
from .filters import CoherenceParams, shock_iterate
from .mesh import plan_mesh
from .orientation import OrientationParams, orientation_from_image
from .planning import PathParams, metrics, plan
from .refine import RefineParams, refine_mask
from .temporal import TemporalMaskFilter, binarize
from .trajectory import TrajectoryParams, generate as generate_trajectory


def _read(path):
    return pathlib.Path(path).read_bytes()


def _write(path, data):
    pathlib.Path(path).write_bytes(data)


def _parse_start(value):
    try:
        xs, ys = value.split(",")
        return float(xs), float(ys)
    except ValueError:
        raise click.BadParameter(f"expected 'x,y', got {value!r}") from None


@click.group()
def main():
    """Hair-flow mask refinement, orientation fields, stroke planning, trajectories."""


@main.command("mask-filter")
@click.option("--alpha", default=0.9, show_default=True, help="EWMA weight of the newest frame.")
@click.option("--threshold", default=0.5, show_default=True, help="Binarization threshold.")
@click.argument("frames", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("-o", "output", required=True, type=click.Path())
def mask_filter(alpha, threshold, frames, output):
    """Smooth a stream of soft masks (PGM/255) and write the binarized result."""
    filt = TemporalMaskFilter(alpha=alpha)
    for frame in frames:
        filt.partial_fit(formats.soft_mask_from_pgm(_read(frame)))
    _write(output, formats.binary_mask_to_pgm(binarize(filt.soft_mask_, threshold)))


@main.command()
@click.option("--mask", "mask_path", required=True, type=click.Path(exists=True))
@click.option("--cloud", "cloud_path", required=True, type=click.Path(exists=True))
@click.option("--rgb", "rgb_path", required=True, type=click.Path(exists=True))
@click.option("--connectivity", default=8, show_default=True, type=click.Choice(["4", "8"]))
@click.option("-o", "output", required=True, type=click.Path())
def refine(mask_path, cloud_path, rgb_path, connectivity, output):
    """Largest component + depth/hue expansion of a binary mask."""
    refined = refine_mask(
        formats.binary_mask_from_pgm(_read(mask_path)),
        formats.read_ocd(_read(cloud_path)),
        formats.read_ppm(_read(rgb_path)),
        RefineParams(connectivity=int(connectivity)),
    )
    _write(output, formats.binary_mask_to_pgm(refined))


@main.command()
@click.option("--kd", default=7, show_default=True, help="Derivative kernel size.")
@click.option("--ke", default=11, show_default=True, help="Eigenvector window size.")
@click.option("--km", default=3, show_default=True, help="Max/min window size.")
@click.option("--blend", default=0.9, show_default=True, help="Blending rate per iteration.")
@click.option("--iters", default=3, show_default=True, help="Number of iterations.")
@click.option("--convention", default="as-written", show_default=True,
              type=click.Choice(["as-written", "weickert"]))
@click.argument("input_image", type=click.Path(exists=True))
@click.option("-o", "output", required=True, type=click.Path())
def coherence(kd, ke, km, blend, iters, convention, input_image, output):
    """Coherence-enhancing shock filter on a PGM image."""
    params = CoherenceParams(k_delta=kd, k_e=ke, k_m=km, c_blend=blend,
                             iterations=iters, convexity_convention=convention)
    out = shock_iterate(formats.read_pgm(_read(input_image)), params)
    _write(output, formats.write_pgm(out))


@main.command()
@click.option("--kd", default=3, show_default=True, help="Derivative kernel size.")
@click.option("--ke", default=5, show_default=True, help="Tensor averaging window size.")
@click.argument("input_image", type=click.Path(exists=True))
@click.option("-o", "output", required=True, type=click.Path())
@click.option("--preview", type=click.Path(), default=None,
              help="Also write theta quantized to PGM (theta*255/pi).")
def orient(kd, ke, input_image, output, preview):
    """Structure-tensor orientation field of a PGM image, written as ORF1."""
    field = orientation_from_image(formats.read_pgm(_read(input_image)),
                                   OrientationParams(k_delta=kd, k_avg=ke))
    _write(output, formats.write_orf(field))
    if preview:
        _write(preview, formats.write_pgm(viz.theta_preview(field).astype(np.float64)))


@main.command("plan")
@click.option("--field", "field_path", required=True, type=click.Path(exists=True))
@click.option("--mask", "mask_path", required=True, type=click.Path(exists=True))
@click.option("--start", required=True, help="Start point as 'x,y'.")
@click.option("--k", "step_px", default=6.0, show_default=True, help="Step size in pixels.")
@click.option("--max-steps", default=1000, show_default=True)
@click.option("-o", "output", required=True, type=click.Path())
@click.option("--overlay", type=click.Path(), default=None,
              help="Write the path drawn over the theta preview as PPM.")
def plan_cmd(field_path, mask_path, start, step_px, max_steps, output, overlay):
    """Streamline stroke through the orientation field from a start point."""
    field = formats.read_orf(_read(field_path))
    mask = formats.binary_mask_from_pgm(_read(mask_path))
    path = plan(field, mask, _parse_start(start),
                PathParams(step_px=step_px, max_steps=max_steps))
    _write(output, formats.write_path_json(path))
    m = metrics(path, field)
    click.echo(f"{len(path)} points, length {m.length_px:.1f}px, "
               f"terminated by {path.terminated_by}")
    if overlay:
        base = viz.theta_preview(field).astype(np.float64)
        _write(overlay, formats.write_ppm(viz.draw_path(base, path, viz.PLANNER_COLORS["field"])))


@main.command("plan-mesh")
@click.option("--mask", "mask_path", required=True, type=click.Path(exists=True))
@click.option("--cloud", "cloud_path", required=True, type=click.Path(exists=True))
@click.option("--start", required=True, help="Start point as 'x,y'.")
@click.option("--goal-frac", default=0.1, show_default=True,
              help="Bottom fraction of the mask bounding box forming the goal set.")
@click.option("--edge-max", default=0.05, show_default=True,
              help="Maximum 3-D edge length in meters.")
@click.option("-o", "output", required=True, type=click.Path())
def plan_mesh_cmd(mask_path, cloud_path, start, goal_frac, edge_max, output):
    """A* baseline: shortest cloud-mesh path to the bottom of the hair."""
    path = plan_mesh(
        formats.binary_mask_from_pgm(_read(mask_path)),
        formats.read_ocd(_read(cloud_path)),
        _parse_start(start),
        goal_fraction=goal_frac,
        edge_max_m=edge_max,
    )
    _write(output, formats.write_path_json(path))
    click.echo(f"{len(path)} vertices")


@main.command()
@click.option("--path", "path_path", required=True, type=click.Path(exists=True))
@click.option("--mask", "mask_path", required=True, type=click.Path(exists=True))
@click.option("--cloud", "cloud_path", required=True, type=click.Path(exists=True))
@click.option("--speed", default=0.03, show_default=True, help="End-effector speed in m/s.")
@click.option("--lookup-radius", default=5, show_default=True,
              help="Search radius (px) for missing depth.")
@click.option("-o", "output", required=True, type=click.Path())
def traject(path_path, mask_path, cloud_path, speed, lookup_radius, output):
    """Timed 6-DoF poses along a planned path."""
    poses = generate_trajectory(
        formats.read_path_json(_read(path_path)),
        formats.binary_mask_from_pgm(_read(mask_path)),
        formats.read_ocd(_read(cloud_path)),
        TrajectoryParams(speed_mps=speed, lookup_radius_px=lookup_radius),
    )
    _write(output, formats.write_pose_json(poses))
    click.echo(f"{len(poses)} poses over {poses.times[-1]:.2f}s")


@main.command("synth")
@click.option("--kind", default="stripes", show_default=True,
              type=click.Choice(list(synth.KINDS)))
@click.option("--size", default=128, show_default=True)
@click.option("--angle", default=0.0, show_default=True, help="Stripe angle in radians.")
@click.option("--period", default=12.0, show_default=True)
@click.option("--amplitude", default=8.0, show_default=True)
@click.option("--noise", default=0.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("-o", "outdir", required=True, type=click.Path())
def synth_cmd(kind, size, angle, period, amplitude, noise, seed, outdir):
    """Generate a synthetic scene: image.pgm, truth.orf, mask.pgm, cloud.ocd."""
    spec = synth.SyntheticSpec(kind=kind, size=size, angle_rad=angle, period_px=period,
                               amplitude_px=amplitude, noise_sigma=noise, seed=seed)
    img, truth, mask, cloud = synth.generate(spec)
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "image.pgm").write_bytes(formats.write_pgm(img))
    (out / "image.ppm").write_bytes(formats.write_ppm(np.repeat(img[..., None], 3, axis=2)))
    (out / "truth.orf").write_bytes(formats.write_orf(truth))
    (out / "mask.pgm").write_bytes(formats.binary_mask_to_pgm(mask))
    (out / "cloud.ocd").write_bytes(formats.write_ocd(cloud))
    click.echo(f"scene written to {out}")


@main.command("eval")
@click.option("--scene", "scene_dir", required=True, type=click.Path(exists=True),
              help="Directory produced by 'hairflow synth'.")
@click.option("--starts", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--k", "step_px", default=6.0, show_default=True)
@click.option("-o", "output", required=True, type=click.Path())
def eval_cmd(scene_dir, starts, seed, step_px, output):
    """Compare field vs mesh planners over shared start points, write CSV."""
    scene = pathlib.Path(scene_dir)
    img = formats.read_pgm((scene / "image.pgm").read_bytes())
    mask = formats.binary_mask_from_pgm((scene / "mask.pgm").read_bytes())
    cloud = formats.read_ocd((scene / "cloud.ocd").read_bytes())

    field = orientation_from_image(img)
    from .mesh import MeshPlanner
    from .planning import FieldPlanner

    start_set = synth.sample_starts(mask, starts, seed)
    field_planner = FieldPlanner(step_px=step_px).fit(field, mask)
    mesh_planner = MeshPlanner().fit(mask, cloud)
    rows = []
    for sx, sy in start_set:
        for name, planner in (("field", field_planner), ("mesh", mesh_planner)):
            path = planner.predict((sx, sy))
            m = metrics(path, field)
            end = path.points[-1]
            rows.append({
                "planner": name, "start_x": sx, "start_y": sy,
                "n_points": len(path), "length_px": m.length_px,
                "mean_alignment": m.mean_alignment, "mean_turn_rad": m.mean_turn_rad,
                "dx": float(end[0] - sx), "dy": float(end[1] - sy),
                "terminated_by": m.terminated_by,
            })
    _write(output, synth.rows_to_csv(rows))
    click.echo(f"{len(rows)} rows written to {output}")


@main.command()
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static", "static_dir", type=click.Path(), default=None,
              help="Directory of built UI assets to serve at /.")
def serve(port, host, static_dir):
    """Run the HTTP session service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(static_dir=static_dir), host=host, port=port)


def run():
    try:
        main(standalone_mode=False)
    except HairflowError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)


if __name__ == "__main__":
    run()
