
# coding: utf-8

# # Two sources, one parity bit
#
# The destination only wants f(x, y) = (x + y) mod 2, with x uniform on {0,1,2,3} and y on {0,1}.
# x needs 2 bits to send raw, but the destination never has to tell 0 from 2 or 1 from 3.

# In[1]:

import numpy as np

from netfc import (
    build_characteristic_graph,
    build_decoder_lut,
    build_outcome_table,
    chromatic_entropy,
    compression_rate,
    greedy_color,
    mod_sum_alphabets,
    mod_sum_function,
)

alphabets = mod_sum_alphabets()
table = build_outcome_table(mod_sum_function(), alphabets)
table.outputs


# Symbols of x are joined by an edge when some y makes their outputs differ.

# In[2]:

gx = build_characteristic_graph(table, 0)
gy = build_characteristic_graph(table, 1)
print(gx.edges(), gy.edges())


# Greedy coloring merges the symbols that can share a codeword.

# In[3]:

cx, cy = greedy_color(gx), greedy_color(gy)
print(cx.color_of, cy.color_of)

hx = chromatic_entropy(cx, alphabets[0])
hy = chromatic_entropy(cy, alphabets[1])
print("x: %.1f bit, %.0f%% saved" % (hx, compression_rate(hx, 2)))
print("y: %.1f bit, %.0f%% saved" % (hy, compression_rate(hy, 1)))


# The decoder is a 2x2 table indexed by the two colors.

# In[4]:

lut = build_decoder_lut(table, [cx, cy])
lut.table


# In[5]:

print(gx.to_dot(cx, "G_x"))
