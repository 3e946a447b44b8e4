# constants justifying axiom instances
agents: 2
variant: lpltl
[c1]_1 (P -> P)
[c2]_2 (X ~P <-> ~X P)
