
# coding: utf-8

# # Codewords, frames and table dumps

# In[1]:

from netfc import DecoderLut, compile_pipeline, default_config, encode, pack_frame, quantize, unpack_frame

p = compile_pipeline(default_config(bits=6))
stage = p.stages[0]
[enc.codeword_len for enc in stage.encoders]


# One sample becomes three color ids, packed MSB first with no padding between them.

# In[2]:

sample = (0.4, -0.02, 0.01)
symbols = [quantize(q, v) for q, v in zip(p.config.source_quantizers, sample)]
codewords = [encode(enc, s) for enc, s in zip(stage.encoders, symbols)]
frame = pack_frame(codewords, [enc.codeword_len for enc in stage.encoders])
print(symbols, codewords, frame.payload.hex(), frame.num_bits, "bits")


# In[3]:

unpack_frame(frame) == codewords


# The decoder table round-trips through its binary dump.

# In[4]:

blob = stage.lut.to_bytes()
back = DecoderLut.from_bytes(blob)
print(blob[:4], len(blob), "bytes", back.color_counts, (back.table == stage.lut.table).all())
