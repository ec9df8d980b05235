main {
  p.1->q.x;
  if r.e then p.2->r.y; deadlock
  else q.3->r.y; deadlock
}
