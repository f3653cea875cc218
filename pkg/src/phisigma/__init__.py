"""Preimages of Euler's phi and the divisor sum sigma, multiplicity-forcing
prime configurations with exhaustive certification, and desk-scale sieve
counting experiments."""

from .arith import (PrimeFactorization, divisors, euler_phi, factorize, iroot,
                    is_prime, prime_power_sigma_all, prime_power_sigma_solve,
                    sigma, sigma_prime_power)
from .configs import (Certificate, PrimeConfig, SearchStats, VerificationReport,
                      build_config, certify, check_condition_i,
                      check_condition_ii, check_condition_iii,
                      condition_index_set, corollary3_plan, count_matchings,
                      enumerate_matchings, load_config, save_config,
                      search_config, theorem2_search, verify)
from .errors import CapacityError, CertificationError, DomainError
from .preimages import (MultiplicityRecord, PreimageSet,
                        minimal_m_with_multiplicity, multiplicity,
                        multiplicity_table, phi_preimages, sigma_preimages)
from .sievelab import (AlmostPrimeCount, RatioSumReport,
                       count_prime_pairs, count_shifted_almost_primes,
                       l_value, lemma3_reference_constant, ratio_power_sum)
from .sieves import (iter_phi_blocks, iter_sigma_blocks, phi_table,
                     primes_upto, sieve_range, sigma_table, spf_table)

__version__ = "0.1.0"
