"""Shared test helpers: a pool of small validated group presentations."""

from goldman.groups import GroupSpec, surface_presentation


def symplectic_z2():
    return GroupSpec(2, form=[[0, 1], [-1, 0]])


def z3_rank2_form():
    # Free rank 3 with a rank-2 form; e3 spans the free part of ker mu.
    return GroupSpec(3, form=[[0, 1, 0], [-1, 0, 0], [0, 0, 0]])


def z2_z2torsion():
    return GroupSpec(3, relations=[[0, 0, 2]],
                     form=[[0, 1, 0], [-1, 0, 0], [0, 0, 0]])


def scaled_blocks_z4():
    # Two symplectic blocks with pairing values 2 and 3.
    return GroupSpec(4, form=[[0, 2, 0, 0], [-2, 0, 0, 0],
                              [0, 0, 0, 3], [0, 0, -3, 0]])


def torsion_only():
    return GroupSpec(2, relations=[[4, 0], [0, 6]])


def spec_pool():
    """Validated presentations spanning free, torsion, and mixed cases."""
    return [
        symplectic_z2(),
        z3_rank2_form(),
        z2_z2torsion(),
        scaled_blocks_z4(),
        torsion_only(),
        surface_presentation(1, 2),
        surface_presentation(2, 3),
    ]


def random_element(rng, spec, radius=3):
    coords = [rng.randint(-radius, radius) for _ in range(spec.n_generators)]
    return spec.canonical(coords)
