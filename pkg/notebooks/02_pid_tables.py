
# coding: utf-8

# # Quantized PID as a target function
#
# Each controller input is quantized to b bits; the valve command is the PID law on the bin midpoints,
# clamped to [0, 100] and quantized again.

# In[1]:

import numpy as np

from netfc import compile_pipeline, default_config, quantize, dequantize

cfg = default_config(bits=5)
for name, q in zip(("e", "ei", "ed"), cfg.source_quantizers):
    print(name, q.lo, q.hi, "step", q.step)


# In[2]:

q = cfg.source_quantizers[0]
for v in (-20.0, -0.3, 0.0, 0.3, 20.0):
    k = quantize(q, v)
    print(v, "->", k, "->", dequantize(q, k))


# Compile both topologies. The simple one keeps a single three-way table at the controller;
# the cascaded one splits off ``m = kp*e + ki*ei`` at a relay node.

# In[3]:

simple = compile_pipeline(cfg)
cascaded = compile_pipeline(default_config(bits=5, mode="cascaded"))

for p in (simple, cascaded):
    print(p.mode, p.link_bits, "LUT entries:", p.lut_entries)


# Per-source compression. Saturation makes many symbols interchangeable, which is where the savings come from.

# In[4]:

for p in (simple, cascaded):
    for s in p.source_metrics():
        print("%-8s %-3s colors=%3d  H=%.3f bits  compression=%6.2f%%" % (
            p.mode, s["name"], s["num_colors"], s["entropy_bits"], s["compression_pct"]))


# In[5]:

rng = np.random.default_rng(0)
from netfc import run_batch

x = [rng.uniform(q.lo, q.hi, 8) for q in cfg.source_quantizers]
np.c_[run_batch(simple, *x), run_batch(cascaded, *x)]
