# Analysis module