"""Persistent homology over F2: filtered complexes, boundary-matrix reduction,
barcodes and persistence-diagram distances."""

from .barcode import Barcode, Interval, format_barcode, parse_barcode, read_barcode, write_barcode
from .builders import (LandmarkSet, MetricInput, WeightedGraph, build_cech, build_lazy_witness,
                       build_parametrized_witness, build_rips, build_weak_witness, build_wrcf,
                       graph_to_metric, maxmin_landmarks)
from .complex import (FilteredComplex, Simplex, boundary_matrix, close, euler_characteristic,
                      make_complex, read_complex, simplex_rank, write_complex)
from .cubical import CubicalComplex, ImageGrid, build_cubical, cubical_boundary, image_barcode
from .diagrams import PersistenceDiagram, bottleneck, emit_svg, from_barcode, wasserstein
from .errors import PHError
from .matrix import SparseF2Matrix
from .reduction import (ReductionState, betti_numbers, compute_barcode, extract_barcode, is_reduced,
                        reduce, reduce_dual, reduce_standard, reduce_twist)

__version__ = "0.1.0"
