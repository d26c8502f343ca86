"""Reputation-gated content trading between cooperative vehicle fleets.

The package splits into scenario and domain types (core, mobility,
channel, content), the market layer (economics, stackelberg), trust
(reputation), adaptive pricing (learning), and the episode simulator
(sim) with its command line front end (cli).
"""

from .channel import (ChannelParams, channel_gain, delay_vector, energy_cost,
                      link_rate, transmit_power)
from .content import (BrokerState, Content, Metadata, MockSigner,
                      PopularityParams, QoCSVector, Subscription,
                      build_metadata, deserialize_metadata, publish, subscribe,
                      serialize_metadata, verify_metadata, zipf_popularity)
from .core import (BEHAVIOR_PROFILES, LEGITIMATE, MALICIOUS, SCHEMES,
                   SPECULATIVE, Cav, Fleet, ScenarioConfig, TimeSlot, fork_rng,
                   load_config, validate_config)
from .economics import (EconParams, PriceVector, SubscriberGroup,
                        group_payment, group_utility, publisher_cost,
                        publisher_utility, satisfaction, subscriber_utility)
from .learning import (ActionGrid, DynamicGame, HotbootCache, LearnParams,
                       PublisherLearner, SubscriberLearner,
                       fixed_price_baseline, greedy_baseline, hotboot,
                       load_hotboot_cache, qlearning_baseline, quantize,
                       run_dynamic_game, sample_action, save_hotboot_cache)
from .mobility import (BodyGeometry, ControlInput, VehicleState,
                       normalize_heading, pairwise_distance, slip_angle,
                       step_bicycle)
from .reputation import (BehaviorLedger, ReputationTracker, TrustParams,
                         VehicleRecord, behavior_effect, bit_params,
                         dump_ledger_csv, negative_effect, positive_effect,
                         record_report, reputation, role_effect)
from .sim import (EpisodeResult, Metrics, SchemeConfig, World, compare_schemes,
                  compute_metrics, convergence_slot, generate_scenario,
                  run_episode, scheme_config, summarize_comparison)
from .stackelberg import (Equilibrium, GameInstance, best_response_qocs,
                          optimal_price, solve_brute_force, solve_se)

__version__ = "0.1.0"
