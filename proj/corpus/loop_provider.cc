def X {
  p.e->q.x; p.e->q.x; r.e'->q.y;
  if q.(x=y) then q->p[L]; X
  else q->p[R]; stop
}
main { X }
