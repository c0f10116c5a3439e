"""Solvers and instance generators for coalitional manipulation of elections
under incomplete information.

Subpackages:

- core: candidates, partial votes, profiles, extension enumeration
- rules: voting rules and incremental tallies
- flownet: max-flow, flows with lower bounds, bipartite matching
- oracle: exact brute-force deciders over extension x ballot space
- polysolve: polynomial-time deciders for specific rule/problem pairs
- synth: profiles realizing prescribed margins or scores
- gadgets: reductions from exact 3-cover to manipulation questions
- electionfile: text serialization of instances
- routing: problem/rule dispatch between polysolve and oracle
- cli: command-line front end
"""

__version__ = "0.1.0"
