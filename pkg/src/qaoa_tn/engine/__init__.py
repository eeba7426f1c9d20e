"""Bucket-elimination contraction engine."""

from .backends import (DEFAULT_MAX_WIDTH, Backend, MatmulBackend, MixedBackend, NaiveBackend,
                       einsum_contract, get_backend, pairwise_contract, register_backend,
                       tensor_bytes)
from .contraction import (MERGE_RULES, check_width_cap, contract_bucket, contract_network, make_schedule,
                          max_result_width, merge_buckets)
from .energy import EnergyResult, edge_network, edge_term, energy_expectation, plan
from .instrument import (ContractionReport, TimingRecord, aggregate_by_width, read_timing_csv,
                         write_report_csv, write_timing_csv)
from ..ordering import Bucket
