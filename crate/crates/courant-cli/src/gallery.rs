//! Built-in gallery of structure files: small, fully worked examples that
//! exercise every construction the toolkit supports.  Each entry documents
//! its own provenance in the leading comment of its text.

/// A named, embedded structure file.
pub struct GalleryEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

/// Look up a gallery entry by name.
pub fn find(name: &str) -> Option<&'static GalleryEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// All gallery entries, in display order.
pub fn entries() -> &'static [GalleryEntry] {
    ENTRIES
}

const ENTRIES: &[GalleryEntry] = &[
    GalleryEntry {
        name: "standard-r2",
        summary: "untwisted standard structure TM + T*M over a 2-dimensional chart",
        text: "\
# The standard Courant structure on the plane: sections are vector fields
# plus 1-forms, the pairing is the tautological one, the anchor projects
# to the vector part, and the bracket is the untwisted Dorfman bracket.
[chart]
names = x1, x2
",
    },
    GalleryEntry {
        name: "standard-r3",
        summary: "untwisted standard structure TM + T*M over a 3-dimensional chart",
        text: "\
# The standard Courant structure in three coordinates: the untwisted
# Dorfman bracket on vector fields plus 1-forms.
[chart]
names = x1, x2, x3
",
    },
    GalleryEntry {
        name: "standard-r4",
        summary: "untwisted standard structure TM + T*M over a 4-dimensional chart",
        text: "\
# The standard Courant structure in four coordinates: the untwisted
# Dorfman bracket on vector fields plus 1-forms.
[chart]
names = x1, x2, x3, x4
",
    },
    GalleryEntry {
        name: "twisted-r3",
        summary: "standard structure twisted by the closed 3-form x1 dx1^dx2^dx3",
        text: "\
# Twisted standard structure in three coordinates.  The twist
# x1 dx1^dx2^dx3 is closed (every 3-form on a 3-dimensional chart is),
# so the twisted Dorfman bracket satisfies the Jacobi identity.
[chart]
names = x1, x2, x3
[twist]
form = x1*d[x1,x2,x3]
",
    },
    GalleryEntry {
        name: "nonclosed-r4",
        summary: "twisted bracket with non-closed twist; requires --force, fails Jacobi",
        text: "\
# Twisted bracket in four coordinates whose twist is NOT closed:
# d(x1 dx2^dx3^dx4) = dx1^dx2^dx3^dx4.  Constructing this host is
# gated and needs --force; the Jacobi check then fails with a frame
# witness whose residual is the non-closed direction.
[chart]
names = x1, x2, x3, x4
[twist]
form = x1*d[x2,x3,x4]
",
    },
    GalleryEntry {
        name: "so3-point",
        summary: "the quadratic Lie algebra so(3) as a structure over a point",
        text: "\
# The compact quadratic Lie algebra so(3) viewed as a Courant structure
# over a zero-dimensional chart: zero anchor, identity pairing, cyclic
# bracket table g1 g2 = g3 and its antisymmetric completions.
[chart]
names =
[structure]
labels = g1, g2, g3
pairing = [1, 0, 0; 0, 1, 0; 0, 0, 1]
bracket g1 g2 = g3
bracket g2 g1 = -g3
bracket g2 g3 = g1
bracket g3 g2 = -g1
bracket g3 g1 = g2
bracket g1 g3 = -g2
",
    },
    GalleryEntry {
        name: "merker-r2",
        summary: "matched sum of the standard structure with a split rank-4 fiber",
        text: "\
# Matched sum over a 2-dimensional chart: the standard structure on the
# base matched with the double V + V* of a rank-2 bundle carrying the
# crosswise pairing and the trivial (flat) connection.  The [dirac-left]
# block is the graph of the symplectic form dx^dy; the [dirac-right]
# block is the graph of the constant pairing map sending v1 to mu2 and
# v2 to -mu1.
[chart]
names = x, y
[fiber]
labels = v1, v2, mu1, mu2
pairing = [0, 0, 1, 0; 0, 0, 0, 1; 1, 0, 0, 0; 0, 1, 0, 0]
[dirac-left]
span = e_x + d_y ; e_y - d_x
complement = d_x ; d_y
[dirac-right]
span = v1 + mu2 ; v2 - mu1
complement = mu1 ; mu2
",
    },
    GalleryEntry {
        name: "complex-c1",
        summary: "holomorphic/antiholomorphic decomposition over one complex coordinate",
        text: "\
# Decomposition of the complexified standard structure over one complex
# coordinate z: the holomorphic half pairs (1,0)-fields with (0,1)-forms,
# the antiholomorphic half is its conjugate, and the matched sum is
# isomorphic to the untwisted standard structure after reordering.
[complex]
holomorphic = z
",
    },
    GalleryEntry {
        name: "complex-c2-h21",
        summary: "twisted decomposition over two complex coordinates, twist dz1^dz2^dzb1",
        text: "\
# Decomposition of the twisted complexified standard structure over two
# complex coordinates with twist dz1^dz2^dzb1.  The twist has constant
# coefficients (hence is closed) and sits in bidegree (2,1), so it feeds
# the cross-connection acting on the antiholomorphic half; dropping it
# breaks the isomorphism with the twisted standard structure.
[complex]
holomorphic = z1, z2
twist = d[z1,z2,zb1]
",
    },
    GalleryEntry {
        name: "regular-abelian-r2",
        summary: "regular structure with abelian rank-2 fiber and isotropic curvature",
        text: "\
# Regular structure over a 2-dimensional chart with an abelian rank-2
# fiber: hyperbolic fiber pairing, flat fiber connection, and curvature
# x dx^dy valued in the isotropic line through g1.  The curvature pins
# the fiber-block normalization uniquely, and because the curvature is
# isotropic the 4-form obstruction vanishes, so the structure also
# splits as a flat matched pair.
[chart]
names = x, y
[regular]
labels = g1, g2
kappa = [0, 1; 1, 0]
r x y = x*g1
r y x = -x*g1
lambda = 2
",
    },
    GalleryEntry {
        name: "regular-so3",
        summary: "regular structure with so(3) fiber, flat connection, no curvature",
        text: "\
# Regular structure over a 2-dimensional chart whose fiber is the
# quadratic Lie algebra so(3) with identity pairing, flat connection,
# and vanishing curvature: the double construction of a trivial bundle
# of compact quadratic Lie algebras.
[chart]
names = x, y
[regular]
labels = g1, g2, g3
kappa = [1, 0, 0; 0, 1, 0; 0, 0, 1]
bracket g1 g2 = g3
bracket g2 g1 = -g3
bracket g2 g3 = g1
bracket g3 g2 = -g1
bracket g3 g1 = g2
bracket g1 g3 = -g2
lambda = 2
",
    },
    GalleryEntry {
        name: "dirac-graph-omega",
        summary: "graph of the symplectic form dx^dy inside the standard structure",
        text: "\
# The graph of the 2-form dx^dy inside the standard structure on the
# plane: sections X + i_X omega with the coordinate covector frame as
# complement.  The form is closed, so the graph is integrable.
[chart]
names = x, y
[dirac]
span = e_x + d_y ; e_y - d_x
complement = d_x ; d_y
",
    },
    GalleryEntry {
        name: "dirac-graph-pi",
        summary: "graph of the constant bivector with pi(dx,dy) = 1",
        text: "\
# The graph of the constant bivector pi with pi(dx,dy) = 1 inside the
# standard structure on the plane: sections pi#(a) + a with the
# coordinate vector frame as complement.  Constant bivectors satisfy
# the Poisson condition, so the graph is integrable.
[chart]
names = x, y
[dirac]
span = e_y + d_x ; -e_x + d_y
complement = e_x ; e_y
",
    },
    GalleryEntry {
        name: "port-hamiltonian",
        summary: "symplectic graph coupled to one port pair through a constant port map",
        text: "\
# Port interconnection over a 2-dimensional chart: the graph of the
# symplectic form dx^dy coupled to one port pair (v1, mu1) through the
# constant port map sending dx to v1.  Flow sections pick up the port
# contribution C = A o sharp, and the port covector line carries -C*
# so the span stays isotropic; the connection is trivial, the port map
# is parallel, and the interconnection is integrable.
[chart]
names = x, y
[fiber]
labels = v1, mu1
pairing = [0, 1; 1, 0]
[dirac]
span = e_x + d_y ; e_y - d_x - v1 ; d_y + mu1
complement = d_x ; d_y ; v1
",
    },
];
